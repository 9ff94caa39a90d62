/** The annotation-scheme state machine behind the review form.
 *
 * Hate speech (label 1) must either name at least one target group or be
 * flagged toxic — insulting without a concrete target — and the two are
 * mutually exclusive: marking a judgment toxic clears and disables the
 * target list. A negative judgment (label 0) carries neither.
 *
 * The form state is only reachable through the transitions below, which
 * keep those rules as structural invariants, so no sequence of clicks can
 * produce a submission the server would reject as a scheme violation.
 */

import type { ReviewBody } from "./types.js";

/** Target groups, in the fixed display order reviewers memorize. */
export const TARGETS = [
  "SEX",
  "AGE",
  "GENDER",
  "RELIGION",
  "NATIONALITY",
  "IMPAIRMENT",
  "STATUS",
  "POLITICS",
  "APPEARANCE",
  "OTHER",
] as const;

export type Target = (typeof TARGETS)[number];

export interface FormState {
  readonly label: 0 | 1;
  readonly toxic: boolean;
  readonly targets: readonly Target[];
}

export class SchemeViolation extends Error {}

export function emptyForm(): FormState {
  return { label: 0, toxic: false, targets: [] };
}

/** Switching to label 0 drops toxic and targets; they have no meaning there. */
export function setLabel(state: FormState, label: 0 | 1): FormState {
  if (label === state.label) return state;
  if (label === 0) return { label: 0, toxic: false, targets: [] };
  return { label: 1, toxic: state.toxic, targets: state.targets };
}

/** Toxic is only selectable on a positive label, and clears the targets. */
export function setToxic(state: FormState, toxic: boolean): FormState {
  if (state.label !== 1 || toxic === state.toxic) return state;
  return { label: 1, toxic, targets: toxic ? [] : state.targets };
}

/** Targets are only selectable on a positive, non-toxic judgment. */
export function toggleTarget(state: FormState, target: Target): FormState {
  if (!targetsEnabled(state)) return state;
  const targets = state.targets.includes(target)
    ? state.targets.filter((existing) => existing !== target)
    : TARGETS.filter(
        (candidate) =>
          state.targets.includes(candidate) || candidate === target,
      );
  return { label: 1, toxic: false, targets };
}

export function toxicEnabled(state: FormState): boolean {
  return state.label === 1;
}

export function targetsEnabled(state: FormState): boolean {
  return state.label === 1 && !state.toxic;
}

/** A positive judgment needs a target group or the toxic flag. */
export function canSubmit(state: FormState): boolean {
  if (state.label === 0) return true;
  return state.toxic || state.targets.length > 0;
}

/** The only way a request body leaves the form. Throws on invalid state,
 *  which is unreachable through the transitions above. */
export function reviewBody(state: FormState): ReviewBody {
  if (!canSubmit(state)) {
    throw new SchemeViolation(
      "hate speech needs a target group or the toxic flag",
    );
  }
  return {
    label: state.label,
    toxic: state.toxic,
    targets: [...state.targets],
  };
}
