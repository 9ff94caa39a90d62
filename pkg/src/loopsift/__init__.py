"""loopsift: a human-in-the-loop pipeline for binary hate-speech triage.

The package is organized as a library:

- :mod:`loopsift.store` — append-only corpus, annotation and snapshot store;
- :mod:`loopsift.textprep` — deterministic preprocessing profiles;
- :mod:`loopsift.mnb` — tfidf n-gram features and multinomial Naive Bayes;
- :mod:`loopsift.quality` — inter-rater reliability and QC reports;
- :mod:`loopsift.evalharness` — metrics, experiments, synthetic corpora;
- :mod:`loopsift.hitl` — queues, balancing, retrain triggers, weekly cycles;
- :mod:`loopsift.service` — HTTP review and scoring service;
- :mod:`loopsift.cli` — command-line front end over all of the above.
"""

from __future__ import annotations

__version__ = "0.1.0"
