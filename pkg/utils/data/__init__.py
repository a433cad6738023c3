"""
data module docstring.

The data module holds the read-only material every run starts from: the presentations of the built-in
theories and the expected labels of the classification tables. It hides low-level details, i.e. where
a presentation lives on disk or how a Boom variant spells its equations, and provides plain text to
`utils.dsl.parse_theory` and plain label grids to `model.atlas`.

The catalog is assembled by the following functions (see `catalog.py`):
    - get_boom_text, which writes the presentation of one of the sixteen extended-Boom theories from its
      axiom letters (U: unit, A: associativity, C: commutativity, I: idempotence)
    - get_composite_text, which writes the presentation of a composite MT, ML, MM, PT, PL or PM: the outer
      letter is the additive layer (M multiset, P powerset), the inner letter the multiplicative one
      (T tree, L list, M multiset), glued by the zero and distributivity equations
    - get_exception_text, which writes the exception theory for a non-empty set of labels
    - get_extra_text, which reads one of the hand-written presentations under `theories/`

The expected labels (see `tables.py`) are transcribed cell for cell from the published classification
grids: the original Boom table (4x4), the extended Boom table (16x16), the table with the six composites
(10x10), the iterated-composition table (3x3) and the inverse-trouble example table (3x4). Rows are the
S side and columns the T side of a law S∘T ⇒ T∘S.
"""
