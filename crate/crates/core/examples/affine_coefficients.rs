//! Exact weights of the symmetric affine schemes and their order conditions.

use affine_split::schemes::{solve_affine_coefficients, AffineScheme};
use num_rational::BigRational;
use num_traits::Zero;

fn main() -> affine_split::Result<()> {
    for s in 1..=5 {
        let gammas = solve_affine_coefficients(s)?;
        let scheme = AffineScheme::new(s)?;
        let shown: Vec<String> = gammas.iter().map(|g| g.to_string()).collect();
        println!("order {:>2}: gamma = [{}]", scheme.order(), shown.join(", "));

        let sum: BigRational = gammas.iter().sum();
        assert_eq!(sum, BigRational::new(1.into(), 2.into()));
        for m in 1..s {
            let moment: BigRational = gammas
                .iter()
                .enumerate()
                .map(|(j, g)| g / BigRational::from_integer(((j + 1) as i64).pow(2 * m as u32).into()))
                .sum();
            assert!(moment.is_zero(), "moment {m} of stage {s}");
        }
        let (a, _) = scheme.evaluations_per_step();
        println!("          {a} evaluations of each flow per step");
    }
    Ok(())
}
