//! Dense complex matrices and the matrix exponential.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
];
const THETA_13: f64 = 5.371920351148152;

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Complex product through four real GEMMs.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let ar = a.map(|z| z.re);
    let ai = a.map(|z| z.im);
    let br = b.map(|z| z.re);
    let bi = b.map(|z| z.im);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, Complex64::new)
}

/// Maximum absolute column sum.
pub fn norm1(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

fn scaled_sum(terms: &[(f64, &CMatrix)], n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    for (c, m) in terms {
        out.zip_apply(*m, |o, v| *o += v * *c);
    }
    out
}

/// Returns `(U, V)` of the diagonal Padé approximant `(V - U)⁻¹ (V + U)`.
fn pade_low(a: &CMatrix, b: &[f64]) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let a2 = matmul(a, a);
    let mut powers = vec![identity(n), a2.clone()];
    while powers.len() < b.len() / 2 {
        let next = matmul(powers.last().unwrap(), &a2);
        powers.push(next);
    }
    let mut u_inner = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for (j, p) in powers.iter().enumerate() {
        u_inner.zip_apply(p, |o, x| *o += x * b[2 * j + 1]);
        v.zip_apply(p, |o, x| *o += x * b[2 * j]);
    }
    (matmul(a, &u_inner), v)
}

fn pade13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let b = &PADE13;
    let id = identity(n);
    let a2 = matmul(a, a);
    let a4 = matmul(&a2, &a2);
    let a6 = matmul(&a4, &a2);
    let u_hi = scaled_sum(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n);
    let u_lo = scaled_sum(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)], n);
    let u = matmul(a, &(matmul(&a6, &u_hi) + u_lo));
    let v_hi = scaled_sum(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n);
    let v_lo = scaled_sum(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)], n);
    let v = matmul(&a6, &v_hi) + v_lo;
    (u, v)
}

/// `exp(M)` by scaling and squaring with a diagonal Padé approximant of
/// degree 3, 5, 7, 9 or 13 chosen from the 1-norm.
pub fn expm(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::SizeMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let norm = norm1(m);

    let mut squarings = 0u32;
    let (u, v) = if let Some(&(deg, _)) = THETA.iter().find(|(_, th)| norm <= *th) {
        let b: &[f64] = match deg {
            3 => &PADE3,
            5 => &PADE5,
            7 => &PADE7,
            _ => &PADE9,
        };
        pade_low(m, b)
    } else {
        let s = (norm / THETA_13).log2().ceil().max(0.0);
        if s > 1000.0 {
            return Err(Error::ExpmOverflow(norm));
        }
        squarings = s as u32;
        let scaled = m.map(|z| z / 2f64.powi(squarings as i32));
        pade13(&scaled)
    };

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).ok_or(Error::Singular)?;
    for _ in 0..squarings {
        r = matmul(&r, &r);
    }
    if r.iter().any(|z| !z.is_finite()) {
        return Err(Error::ExpmOverflow(norm));
    }
    Ok(r)
}
