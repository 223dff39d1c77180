"""Surface realization pipeline toolkit.

Reconstructs natural-language realizations from shuffled, lemmatized,
dependency-annotated token sequences: corpus parsing, tree linearization,
delemmatization maps, vocabulary-overlap filtering, factored export,
deterministic baseline realizers, and BLEU/NIST/DIST evaluation.
"""

from srp.augment import TrainingPair, Vocabulary
from srp.conllu import FormatError, Instance, Token, ValidationReport
from srp.delemma import DelemmaMap
from srp.deptree import DepTree, Ordering
from srp.factored import FactoredToken, FactorSchema
from srp.metrics import EvalReport
from srp.realizer import PrecedenceTable

__all__ = [
    "DelemmaMap",
    "DepTree",
    "EvalReport",
    "FactorSchema",
    "FactoredToken",
    "FormatError",
    "Instance",
    "Ordering",
    "PrecedenceTable",
    "Token",
    "TrainingPair",
    "ValidationReport",
    "Vocabulary",
]

__version__ = "0.1.0"
