"""Toy-scale factored encoder-decoder surface realizer.

Consumes the factored source/target text files and schema JSON produced
by the companion pipeline's export step, and scores decodes through its
`evaluate` command line.
"""

__version__ = "0.1.0"
