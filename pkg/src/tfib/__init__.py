"""tfib: torus-fibration laboratory.

Exact integer/affine linear algebra (`zlat`), charted integral affine
manifolds with singularities and their holonomy (`affine`), discriminant
graphs on boundaries of scaled simplices (`polybase`), topological
bookkeeping of semi-stable compactifications (`topo`), a numerical
symplectic lab of explicit fibration models (`symplab`), period lattices
and monodromy (`periods`), and the invariant calculus of stitched
fibrations (`germs`).
"""

__version__ = "0.1.0"
