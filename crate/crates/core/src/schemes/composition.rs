use num_complex::Complex64;

use super::StepCounter;
use crate::error::{invalid, Result};
use crate::propagators::Splitting;

/// `Φ(Δt) = φ_B(b_sΔt)∘φ_A(a_sΔt)∘⋯∘φ_B(b_1Δt)∘φ_A(a_1Δt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionScheme {
    name: String,
    a: Vec<f64>,
    b: Vec<f64>,
    order: usize,
}

impl CompositionScheme {
    pub fn new(name: impl Into<String>, a: Vec<f64>, b: Vec<f64>, order: usize) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(invalid("coefficients", "a and b must be non-empty and of equal length"));
        }
        for (label, c) in [("a", &a), ("b", &b)] {
            let sum: f64 = c.iter().sum();
            if (sum - 1.0).abs() > 1e-14 {
                return Err(invalid("coefficients", format!("Σ{label} = {sum}, expected 1")));
            }
        }
        Ok(CompositionScheme {
            name: name.into(),
            a,
            b,
            order,
        })
    }

    pub fn lie_trotter() -> Self {
        Self::new("lie-trotter", vec![1.0], vec![1.0], 1).unwrap()
    }

    pub fn strang() -> Self {
        Self::new("strang", vec![0.5, 0.5], vec![1.0, 0.0], 2).unwrap()
    }

    pub fn ruth() -> Self {
        Self::new(
            "ruth",
            vec![1.0, -2.0 / 3.0, 2.0 / 3.0],
            vec![-1.0 / 24.0, 3.0 / 4.0, 7.0 / 24.0],
            3,
        )
        .unwrap()
    }

    pub fn neri() -> Self {
        let c = 2f64.cbrt();
        let a1 = 1.0 / (2.0 * (2.0 - c));
        let a2 = (1.0 - c) / (2.0 * (2.0 - c));
        let b1 = 2.0 * a1;
        let b2 = -c * b1;
        Self::new("neri", vec![a1, a2, a2, a1], vec![b1, b2, b1, 0.0], 4).unwrap()
    }

    /// Yoshida's sixth-order symmetric composition of seven Strang steps
    /// with adjacent half-steps of `φ_A` merged.
    pub fn yoshida6() -> Self {
        let w1 = -1.177_679_984_178_871_006_95;
        let w2 = 0.235_573_213_359_358_133_684;
        let w3 = 0.784_513_610_477_557_263_819;
        let w0 = 1.0 - 2.0 * (w1 + w2 + w3);
        let w = [w3, w2, w1, w0, w1, w2, w3];
        let mut a = Vec::with_capacity(8);
        a.push(w[0] / 2.0);
        for i in 1..7 {
            a.push((w[i - 1] + w[i]) / 2.0);
        }
        a.push(w[6] / 2.0);
        let mut b = w.to_vec();
        b.push(0.0);
        Self::new("yoshida6", a, b, 6).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn stages(&self) -> usize {
        self.a.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `(φ_A, φ_B)` evaluations per step; zero coefficients cost nothing.
    pub fn evaluations_per_step(&self) -> (u64, u64) {
        let count = |c: &[f64]| c.iter().filter(|&&x| x != 0.0).count() as u64;
        (count(&self.a), count(&self.b))
    }
}

pub fn composition_step<S: Splitting + ?Sized>(
    scheme: &CompositionScheme,
    split: &S,
    u: &mut [Complex64],
    dt: f64,
    counter: &mut StepCounter,
) -> Result<()> {
    for (&a, &b) in scheme.a.iter().zip(&scheme.b) {
        if a != 0.0 {
            split.flow_a(u, a * dt)?;
            counter.evals_a += 1;
        }
        if b != 0.0 {
            split.flow_b(u, b * dt)?;
            counter.evals_b += 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn neri_coefficients() {
        let s = CompositionScheme::neri();
        assert!((s.a()[0] - 0.675_603_595_979_828_9).abs() < 1e-15);
        assert!((s.a()[0] - 0.675604).abs() < 1e-6);
        assert_eq!(s.a()[0], s.a()[3]);
        assert!((s.a()[1] + 0.175_603_595_979_828_8).abs() < 1e-15);
        assert_eq!(s.b()[3], 0.0);
        assert_eq!(s.evaluations_per_step(), (4, 3));
    }

    #[test]
    fn ruth_sums_are_exact_rationals() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let a = [q(1, 1), q(-2, 3), q(2, 3)];
        let b = [q(-1, 24), q(3, 4), q(7, 24)];
        assert_eq!(a.iter().cloned().sum::<BigRational>(), q(1, 1));
        assert_eq!(b.iter().cloned().sum::<BigRational>(), q(1, 1));
    }

    #[test]
    fn per_step_costs() {
        assert_eq!(CompositionScheme::lie_trotter().evaluations_per_step(), (1, 1));
        assert_eq!(CompositionScheme::strang().evaluations_per_step(), (2, 1));
        assert_eq!(CompositionScheme::ruth().evaluations_per_step(), (3, 3));
        assert_eq!(CompositionScheme::yoshida6().evaluations_per_step(), (8, 7));
    }

    #[test]
    fn yoshida_is_symmetric() {
        let s = CompositionScheme::yoshida6();
        let a = s.a();
        for i in 0..8 {
            assert!((a[i] - a[7 - i]).abs() < 1e-15);
        }
        let b = &s.b()[..7];
        for i in 0..7 {
            assert_eq!(b[i], b[6 - i]);
        }
    }

    #[test]
    fn rejects_inconsistent_coefficients() {
        assert!(CompositionScheme::new("x", vec![0.5], vec![1.0], 1).is_err());
        assert!(CompositionScheme::new("x", vec![1.0], vec![0.5, 0.5], 1).is_err());
        assert!(CompositionScheme::new("x", vec![], vec![], 1).is_err());
    }
}
