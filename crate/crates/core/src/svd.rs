//! Singular value decomposition of real 3×3 matrices by two-sided Jacobi
//! rotations.
//!
//! Every sweep visits the pairs (0,1), (0,2), (1,2) in that order. Each step
//! first symmetrizes the 2×2 pivot block with a left rotation and then
//! diagonalizes it with a symmetric Jacobi rotation applied on both sides.
//! The sweep order is fixed, so results are reproducible bit for bit.

use nalgebra::{Matrix3, Vector3};

/// Upper limit on the number of full sweeps.
pub const MAX_SWEEPS: usize = 50;
/// Sweeping stops once every off-diagonal entry is at most this large.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// `a = u * diag(singular_values) * v^T` with `u`, `v` orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Svd3 {
    pub u: Matrix3<f64>,
    /// Non-negative, sorted in descending order.
    pub singular_values: Vector3<f64>,
    pub v: Matrix3<f64>,
    pub sweeps: usize,
}

impl Svd3 {
    pub fn recompose(&self) -> Matrix3<f64> {
        self.u * Matrix3::from_diagonal(&self.singular_values) * self.v.transpose()
    }
}

fn max_off_diagonal(b: &Matrix3<f64>) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                m = m.max(b[(i, j)].abs());
            }
        }
    }
    m
}

fn rotate_pair(
    b: &mut Matrix3<f64>,
    u: &mut Matrix3<f64>,
    v: &mut Matrix3<f64>,
    p: usize,
    q: usize,
) {
    let (a, bpq, bqp, d) = (b[(p, p)], b[(p, q)], b[(q, p)], b[(q, q)]);
    if bpq.abs() <= OFF_DIAGONAL_TOL && bqp.abs() <= OFF_DIAGONAL_TOL {
        return;
    }

    // left rotation making the block symmetric
    let phi = (bqp - bpq).atan2(a + d);
    let (s1, c1) = phi.sin_cos();
    let sp = c1 * a + s1 * bqp;
    let sq = c1 * bpq + s1 * d;
    let sr = -s1 * bpq + c1 * d;

    // symmetric Jacobi rotation
    let theta = 0.5 * (2.0 * sq).atan2(sp - sr);
    let (s2, c2) = theta.sin_cos();

    // g = J^T * L
    let g00 = c2 * c1 - s2 * s1;
    let g01 = c2 * s1 + s2 * c1;
    let g10 = -s2 * c1 - c2 * s1;
    let g11 = -s2 * s1 + c2 * c1;

    for k in 0..3 {
        let (x, y) = (b[(p, k)], b[(q, k)]);
        b[(p, k)] = g00 * x + g01 * y;
        b[(q, k)] = g10 * x + g11 * y;
    }
    for k in 0..3 {
        let (x, y) = (u[(k, p)], u[(k, q)]);
        u[(k, p)] = g00 * x + g01 * y;
        u[(k, q)] = g10 * x + g11 * y;
    }
    for k in 0..3 {
        let (x, y) = (b[(k, p)], b[(k, q)]);
        b[(k, p)] = c2 * x + s2 * y;
        b[(k, q)] = -s2 * x + c2 * y;
    }
    for k in 0..3 {
        let (x, y) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = c2 * x + s2 * y;
        v[(k, q)] = -s2 * x + c2 * y;
    }
}

pub fn svd3(a: &Matrix3<f64>) -> Svd3 {
    let mut b = *a;
    let mut u = Matrix3::identity();
    let mut v = Matrix3::identity();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && max_off_diagonal(&b) > OFF_DIAGONAL_TOL {
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            rotate_pair(&mut b, &mut u, &mut v, p, q);
        }
        sweeps += 1;
    }

    let mut diag = [b[(0, 0)], b[(1, 1)], b[(2, 2)]];
    for (i, s) in diag.iter_mut().enumerate() {
        if *s < 0.0 {
            *s = -*s;
            for k in 0..3 {
                u[(k, i)] = -u[(k, i)];
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let mut su = Matrix3::zeros();
    let mut sv = Matrix3::zeros();
    let mut s = Vector3::zeros();
    for (dst, &src) in order.iter().enumerate() {
        s[dst] = diag[src];
        su.set_column(dst, &u.column(src));
        sv.set_column(dst, &v.column(src));
    }

    Svd3 {
        u: su,
        singular_values: s,
        v: sv,
        sweeps,
    }
}

/// Singular values in descending order.
pub fn singular_values(a: &Matrix3<f64>) -> [f64; 3] {
    let s = svd3(a).singular_values;
    [s[0], s[1], s[2]]
}
