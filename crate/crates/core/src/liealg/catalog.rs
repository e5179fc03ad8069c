//! Standard small Lie algebras.

use super::algebra::LieAlgebra;
use crate::scalar::int;

/// `so(3)`: `[e1, e2] = e3`, `[e2, e3] = e1`, `[e3, e1] = e2`.
pub fn so3() -> LieAlgebra {
    LieAlgebra::from_entries(3, [(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))])
        .expect("so(3) constants")
}

/// `sl(2, R)` in the basis `[X, Y] = -Z`, `[Y, Z] = X`, `[Z, X] = Y`.
pub fn sl2() -> LieAlgebra {
    LieAlgebra::from_entries(3, [(0, 1, 2, int(-1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))])
        .expect("sl(2) constants")
}

/// `gl(2) = sl(2) + center`, the center spanned by the fourth basis vector.
pub fn gl2() -> LieAlgebra {
    LieAlgebra::from_entries(4, [(0, 1, 2, int(-1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))])
        .expect("gl(2) constants")
}

/// The non-abelian 2-dimensional algebra `[e1, e2] = e2`.
pub fn aff1() -> LieAlgebra {
    LieAlgebra::from_entries(2, [(0, 1, 1, int(1))]).expect("aff(1) constants")
}

/// `sl(2) ⋉ R^2` with the defining representation on the last two vectors.
///
/// In the basis `h, e, f, v1, v2`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`,
/// `h v1 = v1`, `h v2 = -v2`, `e v2 = v1`, `f v1 = v2`.
pub fn sl2_semidirect_r2() -> LieAlgebra {
    LieAlgebra::from_entries(
        5,
        [
            (0, 1, 1, int(2)),
            (0, 2, 2, int(-2)),
            (1, 2, 0, int(1)),
            (0, 3, 3, int(1)),
            (0, 4, 4, int(-1)),
            (1, 4, 3, int(1)),
            (2, 3, 4, int(1)),
        ],
    )
    .expect("sl(2) ⋉ R^2 constants")
}

pub fn abelian(n: usize) -> LieAlgebra {
    LieAlgebra::abelian(n)
}
