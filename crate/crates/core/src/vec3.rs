//! Small helpers for complex 3-vectors.

use num_complex::Complex64;

pub type C3 = [Complex64; 3];
pub type R3 = [f64; 3];

pub const ZERO: C3 = [Complex64::new(0.0, 0.0); 3];

pub fn real(v: R3) -> C3 {
    [v[0].into(), v[1].into(), v[2].into()]
}

pub fn add(a: C3, b: C3) -> C3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: C3, b: C3) -> C3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(s: Complex64, a: C3) -> C3 {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn scale_re(s: f64, a: C3) -> C3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Bilinear product `a . b` (no conjugation).
pub fn dot(a: C3, b: C3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Hermitian product `a . conj(b)`.
pub fn inner(a: C3, b: C3) -> Complex64 {
    a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj()
}

pub fn cross(a: C3, b: C3) -> C3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm_sqr(a: C3) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum()
}

pub fn norm(a: C3) -> f64 {
    norm_sqr(a).sqrt()
}

pub fn rnorm(a: R3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub fn conj(a: C3) -> C3 {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

/// Apply a real 3x3 matrix (row-major) to a complex vector.
pub fn mat_apply(m: &[[f64; 3]; 3], a: C3) -> C3 {
    let mut out = ZERO;
    for (i, row) in m.iter().enumerate() {
        out[i] = a[0] * row[0] + a[1] * row[1] + a[2] * row[2];
    }
    out
}

pub fn mat_apply_re(m: &[[f64; 3]; 3], a: R3) -> R3 {
    let mut out = [0.0; 3];
    for (i, row) in m.iter().enumerate() {
        out[i] = row[0] * a[0] + row[1] * a[1] + row[2] * a[2];
    }
    out
}

pub fn transpose(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

/// Rotation about a unit axis by `angle` (right hand rule).
pub fn rotation(axis: R3, angle: f64) -> [[f64; 3]; 3] {
    let n = rnorm(axis);
    let (x, y, z) = (axis[0] / n, axis[1] / n, axis[2] / n);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}
