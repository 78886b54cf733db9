//! Small dense 6x6 linear algebra, point and interval.

use crate::interval::round::{add_up, div_up, sub_down};
use crate::interval::Interval;

pub const N: usize = 6;

pub type Mat = [[f64; N]; N];
pub type IMat = [[Interval; N]; N];
pub type IVec = [Interval; N];

pub fn identity() -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

pub fn to_imat(m: &Mat) -> IMat {
    m.map(|row| row.map(Interval::point))
}

pub fn mid(m: &IMat) -> Mat {
    m.map(|row| row.map(|x| x.mid()))
}

pub fn transpose(m: &Mat) -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i]))
}

pub fn imat_mul(a: &IMat, b: &IMat) -> IMat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = a[i][0] * b[0][j];
            for k in 1..N {
                s += a[i][k] * b[k][j];
            }
            s
        })
    })
}

pub fn imat_vec(a: &IMat, v: &IVec) -> IVec {
    std::array::from_fn(|i| {
        let mut s = a[i][0] * v[0];
        for k in 1..N {
            s += a[i][k] * v[k];
        }
        s
    })
}

pub fn mat_ivec(a: &Mat, v: &IVec) -> IVec {
    imat_vec(&to_imat(a), v)
}

pub fn vec_add(a: &IVec, b: &IVec) -> IVec {
    std::array::from_fn(|i| a[i] + b[i])
}

pub fn vec_sub(a: &IVec, b: &IVec) -> IVec {
    std::array::from_fn(|i| a[i] - b[i])
}

/// Rigorous upper bound of the infinity norm.
pub fn inf_norm_upper(m: &IMat) -> f64 {
    let mut best = 0.0f64;
    for row in m {
        let mut s = 0.0;
        for x in row {
            s = add_up(s, x.mag());
        }
        best = best.max(s);
    }
    best
}

/// Orthonormal factor of a QR decomposition of `a`, columns processed in
/// `order` (modified Gram-Schmidt, two passes).
///
/// Returns `None` when the matrix is numerically singular.
pub fn orthonormalize(a: &Mat, order: &[usize; N]) -> Option<Mat> {
    let mut q = [[0.0f64; N]; N];
    for (jj, &j) in order.iter().enumerate() {
        let mut v: [f64; N] = std::array::from_fn(|i| a[i][j]);
        let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for _ in 0..2 {
            for qc in 0..jj {
                let dot: f64 = (0..N).map(|i| q[i][qc] * v[i]).sum();
                for i in 0..N {
                    v[i] -= dot * q[i][qc];
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 1e-12 * norm0) || !norm.is_finite() {
            return None;
        }
        for i in 0..N {
            q[i][jj] = v[i] / norm;
        }
    }
    Some(q)
}

/// Interval enclosure of `q^{-1}` for a nearly orthogonal `q`.
///
/// With `E = I - q^T q` and `||E|| = d < 1`, `q^{-1} = (I - E)^{-1} q^T` and
/// every entry of `(I - E)^{-1} - I` is bounded by `d/(1 - d)`.
pub fn orthogonal_inverse(q: &Mat) -> Option<IMat> {
    let qt = to_imat(&transpose(q));
    let qi = to_imat(q);
    let qtq = imat_mul(&qt, &qi);
    let e: IMat = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let id = if i == j {
                Interval::ONE
            } else {
                Interval::ZERO
            };
            id - qtq[i][j]
        })
    });
    let d = inf_norm_upper(&e);
    if !(d < 0.5) {
        return None;
    }
    let eps = div_up(d, sub_down(1.0, d));
    let inv: IMat = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let id = if i == j {
                Interval::ONE
            } else {
                Interval::ZERO
            };
            id.inflate(eps)
        })
    });
    Some(imat_mul(&inv, &qt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_inverse_contains_transpose() {
        let (c, s) = (0.6f64, 0.8f64);
        let mut a = identity();
        a[0][0] = c;
        a[0][1] = -s;
        a[1][0] = s;
        a[1][1] = c;
        a[3][2] = 2.0;
        let q = orthonormalize(&a, &[0, 1, 2, 3, 4, 5]).unwrap();
        let inv = orthogonal_inverse(&q).unwrap();
        let prod = imat_mul(&inv, &to_imat(&q));
        for i in 0..N {
            for j in 0..N {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(prod[i][j].contains(want));
                assert!(prod[i][j].width() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_is_rejected() {
        let mut a = identity();
        a[1][1] = 0.0;
        assert!(orthonormalize(&a, &[0, 1, 2, 3, 4, 5]).is_none());
    }
}
