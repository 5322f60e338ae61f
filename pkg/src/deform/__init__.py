"""Exact-arithmetic engine for formal deformation theory of dg algebras.

Subpackages:

* ``linalg``, ``chain``  - exact rational graded linear algebra: complexes,
  homology, Hom/tensor/shift/cone, chain<->cochain conversion.
* ``rings``              - local Artinian dg coefficient rings, m-adic towers,
  small extensions.
* ``dgla``               - dg Lie algebras, Maurer-Cartan equation, gauge
  group (BCH), obstruction lifting, gauge paths.
* ``convolution``        - arity-truncated convolution dg Lie algebras for the
  associative family (Hochschild-type complexes), A-infinity structures.
* ``dgcategory``         - small dg categories, twists, twisted modules over a
  coefficient ring, morphism-level Maurer-Cartan correspondence.
* ``modules``            - twisted-module category at desk scale: reduction,
  contracting homotopies, exhaustive filtrations, lifting along small
  extensions.
* ``problems``/``pipelines``/``cli`` - problem-file ingestion, verification
  pipelines, report emission.
"""

__version__ = "0.1.0"
