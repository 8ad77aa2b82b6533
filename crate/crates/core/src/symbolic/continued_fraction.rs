use serde::Serialize;

use crate::error::{Error, Result};

use super::RotationNumber;

/// `φ = integer_part + 1/(q₁ + 1/(q₂ + …))`, truncated after `quotients`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    pub integer_part: i128,
    pub quotients: Vec<i128>,
}

/// First `depth` partial quotients after the integer part.
///
/// Quadratic rotation numbers expand exactly. A decimal expands as the
/// exact terminating decimal it stores, so quotients deep enough to depend
/// on digits beyond the declared precision are not meaningful.
pub fn continued_fraction(phi: &RotationNumber, depth: usize) -> Result<ContinuedFraction> {
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let mut x = phi.value();
    let integer_part = x.floor();
    x = x.fract();
    let mut quotients = Vec::with_capacity(depth);
    for _ in 0..depth {
        let recip = x.recip().ok_or_else(|| terminated(phi, quotients.len()))?;
        let a = recip.floor();
        quotients.push(a);
        x = recip.fract();
    }
    if x.signum() == 0 {
        return Err(terminated(phi, quotients.len()));
    }
    Ok(ContinuedFraction {
        integer_part,
        quotients,
    })
}

fn terminated(phi: &RotationNumber, after: usize) -> Error {
    Error::Rationality(format!(
        "continued fraction of {phi} terminates after {after} partial quotients"
    ))
}

/// Outcome of the bounded-quotient test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every quotient up to the examined depth is within the bound. This is
    /// evidence, not a proof, of bad approximability.
    YesUpToDepth,
    No,
}

/// Badly approximable numbers are those with bounded partial quotients;
/// this checks the first `depth` of them against `bound`.
pub fn is_badly_approximable_heuristic(
    phi: &RotationNumber,
    depth: usize,
    bound: i128,
) -> Result<Verdict> {
    let cf = continued_fraction(phi, depth)?;
    Ok(if cf.quotients.iter().all(|&a| a <= bound) {
        Verdict::YesUpToDepth
    } else {
        Verdict::No
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_and_silver() {
        let g = continued_fraction(&RotationNumber::golden(), 6).unwrap();
        assert_eq!(g.integer_part, 0);
        assert_eq!(g.quotients, vec![1; 6]);
        let s = continued_fraction(&RotationNumber::silver(), 4).unwrap();
        assert_eq!(s.quotients, vec![2; 4]);
        // Deep expansions stay exact: the period never breaks.
        let deep = continued_fraction(&RotationNumber::golden(), 60).unwrap();
        assert!(deep.quotients.iter().all(|&a| a == 1));
    }

    #[test]
    fn rational_inputs_terminate() {
        let half = RotationNumber::decimal("0.5", 10).unwrap();
        assert!(matches!(
            continued_fraction(&half, 1),
            Err(Error::Rationality(_))
        ));
        assert!(matches!(
            continued_fraction(&half, 3),
            Err(Error::Rationality(_))
        ));
        assert!(continued_fraction(&RotationNumber::golden(), 0).is_err());
    }

    #[test]
    fn e_minus_two() {
        // Quotients of e − 2 follow 1, 2k, 1.
        let e2: RotationNumber = "dec:0.71828182845904523536:20".parse().unwrap();
        let cf = continued_fraction(&e2, 12).unwrap();
        assert_eq!(cf.quotients, vec![1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8, 1]);
        assert_eq!(
            is_badly_approximable_heuristic(&e2, 12, 5).unwrap(),
            Verdict::No
        );
    }

    #[test]
    fn heuristic_verdicts() {
        let g = RotationNumber::golden();
        assert_eq!(
            is_badly_approximable_heuristic(&g, 20, 5).unwrap(),
            Verdict::YesUpToDepth
        );
        assert_eq!(
            is_badly_approximable_heuristic(&g, 20, 0).unwrap(),
            Verdict::No
        );
        assert_eq!(
            is_badly_approximable_heuristic(&RotationNumber::silver(), 30, 2).unwrap(),
            Verdict::YesUpToDepth
        );
    }
}
