use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::Symbol;
use crate::quadratic::QuadSurd;

/// Width of the band around interval endpoints inside which a decimal
/// rotation number refuses to decide membership.
const GUARD_DIGITS: u32 = 12;
/// Most decimal digits a `dec:` rotation number may carry.
const MAX_DECIMAL_DIGITS: u32 = 30;

/// A rotation number φ in (0, 1).
///
/// The quadratic form `(p + q·√d)/c` is exact. The decimal form stores the
/// terminating decimal `num / 10^scale` together with a declared precision:
/// the true φ is trusted to lie within `10^-precision` of the stored value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RotationNumber {
    Quadratic(QuadSurd),
    Decimal(DecimalRotation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalRotation {
    num: i128,
    scale: u32,
    precision: u32,
}

fn pow10(k: u32) -> i128 {
    10i128.pow(k)
}

impl RotationNumber {
    /// `(p + q·√d)/c`, which must be an irrational number in (0, 1).
    pub fn quadratic(p: i128, q: i128, c: i128, d: i128) -> Result<Self> {
        if c == 0 || d < 0 {
            return Err(Error::Domain(
                "quadratic form needs c != 0 and d >= 0".into(),
            ));
        }
        let x = QuadSurd::new(p, q, c, d);
        if x.is_rational() {
            return Err(Error::Rationality(format!("{x} is rational")));
        }
        if x <= QuadSurd::zero() || x >= QuadSurd::one() {
            return Err(Error::Domain(format!(
                "rotation number {x} is not in (0, 1)"
            )));
        }
        Ok(RotationNumber::Quadratic(x))
    }

    /// `(√5 − 1)/2 = 2/(1 + √5)`.
    pub fn golden() -> Self {
        RotationNumber::Quadratic(QuadSurd::new(-1, 1, 2, 5))
    }

    /// `√2 − 1`.
    pub fn silver() -> Self {
        RotationNumber::Quadratic(QuadSurd::new(-1, 1, 1, 2))
    }

    /// A terminating decimal `0.ddd…` trusted to `precision` digits. Digits
    /// beyond `precision` are truncated.
    pub fn decimal(value: &str, precision: u32) -> Result<Self> {
        if precision == 0 || precision > MAX_DECIMAL_DIGITS {
            return Err(Error::Domain(format!(
                "decimal precision must be in 1..={MAX_DECIMAL_DIGITS}"
            )));
        }
        let digits = value.strip_prefix("0.").ok_or_else(|| {
            Error::parse(format!("decimal rotation \"{value}\" must look like 0.ddd"))
        })?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(format!("bad decimal digits in \"{value}\"")));
        }
        let kept = &digits[..digits.len().min(precision as usize)];
        let kept = kept.trim_end_matches('0');
        if kept.is_empty() {
            return Err(Error::Domain("rotation number must be positive".into()));
        }
        let scale = kept.len() as u32;
        let num: i128 = kept.parse().map_err(|_| Error::parse("decimal digits"))?;
        Ok(RotationNumber::Decimal(DecimalRotation {
            num,
            scale,
            precision,
        }))
    }

    /// Exact value (the stored decimal for the decimal form).
    pub fn value(&self) -> QuadSurd {
        match self {
            RotationNumber::Quadratic(x) => *x,
            RotationNumber::Decimal(d) => QuadSurd::rational(d.num, pow10(d.scale)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RotationNumber::Quadratic(_))
    }

    /// The Sturmian coding: `0` iff `{nφ} ∈ [0, φ)`.
    pub fn sturmian_symbol(&self, n: i64) -> Result<Symbol> {
        match self {
            RotationNumber::Quadratic(x) => {
                // {nφ} < φ exactly when ⌊nφ⌋ − ⌊(n−1)φ⌋ = 1.
                let n = n as i128;
                let step = floor_multiple(x, n) - floor_multiple(x, n - 1);
                Ok(Symbol((1 - step) as u8))
            }
            RotationNumber::Decimal(d) => d.symbol(n),
        }
    }
}

/// `⌊n·x⌋` without normalizing the intermediate surd.
fn floor_multiple(x: &QuadSurd, n: i128) -> i128 {
    let (p, q, c, d) = x.parts();
    let nq = n * q;
    let s = num_integer::Roots::sqrt(&((nq * nq * d) as u128)) as i128;
    let irr = if nq >= 0 { s } else { -(s + 1) };
    (n * p + irr).div_euclid(c)
}

impl DecimalRotation {
    fn symbol(&self, n: i64) -> Result<Symbol> {
        let den = pow10(self.scale);
        let prod = (n as i128).checked_mul(self.num).ok_or_else(|| {
            Error::Domain(format!("site {n} too far for decimal rotation arithmetic"))
        })?;
        let r = prod.rem_euclid(den);
        let symbol = Symbol(if r < self.num { 0 } else { 1 });
        // X_n = 1 − (⌊nφ⌋ − ⌊(n−1)φ⌋): the coding is decided unless nφ or
        // (n−1)φ sits within its error band of an integer. The error of mφ
        // is at most |m|·10^-precision, and m = 0 is exact.
        let k = self.scale.max(GUARD_DIGITS).max(self.precision);
        for m in [n as i128, n as i128 - 1] {
            if m == 0 {
                continue;
            }
            let rm = m
                .checked_mul(self.num)
                .ok_or_else(|| {
                    Error::Domain(format!("site {n} too far for decimal rotation arithmetic"))
                })?
                .rem_euclid(den);
            let dist = rm.min(den - rm);
            let lhs = dist.saturating_mul(pow10(k - self.scale));
            let band = pow10(k - GUARD_DIGITS)
                .saturating_add(m.abs().saturating_mul(pow10(k - self.precision)));
            if lhs < band {
                return Err(Error::Ambiguity(format!(
                    "{{{n}·φ}} lies within the guard band of an endpoint of [0, φ); \
                     raise the precision or use the quadratic form"
                )));
            }
        }
        Ok(symbol)
    }
}

impl FromStr for RotationNumber {
    type Err = Error;

    /// `quad:(a+b*sqrtD)/c` or `dec:<0.ddd>[:<precision>]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix("quad:") {
            let (p, q, c, d) = parse_quad(body)?;
            RotationNumber::quadratic(p, q, c, d)
        } else if let Some(body) = s.strip_prefix("dec:") {
            match body.split_once(':') {
                Some((v, prec)) => {
                    let prec = prec
                        .parse()
                        .map_err(|_| Error::parse(format!("bad precision \"{prec}\"")))?;
                    RotationNumber::decimal(v, prec)
                }
                None => {
                    let digits = body.strip_prefix("0.").map(str::len).unwrap_or(0) as u32;
                    RotationNumber::decimal(body, digits.clamp(1, MAX_DECIMAL_DIGITS))
                }
            }
        } else {
            Err(Error::parse(format!(
                "rotation number \"{s}\" must start with quad: or dec:"
            )))
        }
    }
}

fn parse_quad(body: &str) -> Result<(i128, i128, i128, i128)> {
    let bad = || {
        Error::parse(format!(
            "quadratic form \"{body}\" must look like (a+b*sqrtD)/c"
        ))
    };
    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact.strip_prefix('(').ok_or_else(bad)?;
    let (inner, den) = rest.split_once(")/").ok_or_else(bad)?;
    let c: i128 = den.parse().map_err(|_| bad())?;
    // Split "a±b*sqrtD" at the sign that is not the leading one.
    let split = inner
        .char_indices()
        .skip(1)
        .find(|&(_, ch)| ch == '+' || ch == '-')
        .map(|(i, _)| i)
        .ok_or_else(bad)?;
    let (a, rest) = inner.split_at(split);
    let p: i128 = a.parse().map_err(|_| bad())?;
    let (coef, rad) = rest.split_once("*sqrt").ok_or_else(bad)?;
    let q: i128 = coef.trim_start_matches('+').parse().map_err(|_| bad())?;
    let d: i128 = rad.parse().map_err(|_| bad())?;
    Ok((p, q, c, d))
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationNumber::Quadratic(x) => write!(f, "quad:{x}"),
            RotationNumber::Decimal(d) => {
                write!(
                    f,
                    "dec:0.{:0>width$}:{}",
                    d.num,
                    d.precision,
                    width = d.scale as usize
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Alphabet;

    fn word(phi: &RotationNumber, len: i64) -> String {
        let syms: Vec<Symbol> = (0..len).map(|n| phi.sturmian_symbol(n).unwrap()).collect();
        Alphabet::binary().format_word(&syms)
    }

    #[test]
    fn golden_word() {
        let g = RotationNumber::golden();
        assert_eq!(word(&g, 7), "0101001");
        assert_eq!(g.sturmian_symbol(0).unwrap(), Symbol(0));
        assert_eq!(g.sturmian_symbol(1).unwrap(), Symbol(1));
    }

    #[test]
    fn exact_and_float_codings_agree_far_from_endpoints() {
        let g = RotationNumber::golden();
        let phi = g.to_f64();
        for n in -2000i64..2000 {
            let frac = (n as f64 * phi).rem_euclid(1.0);
            if (frac - phi).abs() < 1e-9 || !(1e-9..=1.0 - 1e-9).contains(&frac) {
                continue;
            }
            let expect = if frac < phi { 0 } else { 1 };
            assert_eq!(g.sturmian_symbol(n).unwrap(), Symbol(expect), "n = {n}");
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in [
            "quad:(-1+1*sqrt5)/2",
            "quad:(-1+1*sqrt2)/1",
            "dec:0.6180339887:30",
            "dec:0.71828182845904523536:20",
        ] {
            let phi: RotationNumber = text.parse().unwrap();
            assert_eq!(phi.to_string(), text);
            assert_eq!(phi.to_string().parse::<RotationNumber>().unwrap(), phi);
        }
        assert_eq!(
            "quad:(-1+1*sqrt5)/2".parse::<RotationNumber>().unwrap(),
            RotationNumber::golden()
        );
        assert_eq!(
            "quad:( 3 - 1*sqrt5 )/2"
                .parse::<RotationNumber>()
                .unwrap()
                .to_string(),
            "quad:(3-1*sqrt5)/2"
        );
    }

    #[test]
    fn rejects_bad_rotations() {
        assert!(matches!(
            "quad:(1+1*sqrt4)/4".parse::<RotationNumber>(),
            Err(Error::Rationality(_))
        ));
        assert!(matches!(
            "quad:(1+1*sqrt5)/2".parse::<RotationNumber>(),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            "golden".parse::<RotationNumber>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "quad:1+sqrt5".parse::<RotationNumber>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "dec:1.5:10".parse::<RotationNumber>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "dec:0.000:10".parse::<RotationNumber>(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn decimal_guard_band() {
        let half = RotationNumber::decimal("0.5", 30).unwrap();
        assert_eq!(half.sturmian_symbol(0).unwrap(), Symbol(0));
        assert_eq!(half.sturmian_symbol(1).unwrap(), Symbol(1));
        assert!(matches!(half.sturmian_symbol(2), Err(Error::Ambiguity(_))));

        // A 30-digit golden ratio reproduces the exact word far out.
        let dec: RotationNumber = "dec:0.618033988749894848204586834366:30".parse().unwrap();
        let g = RotationNumber::golden();
        for n in 0..20_000 {
            assert_eq!(
                dec.sturmian_symbol(n).unwrap(),
                g.sturmian_symbol(n).unwrap()
            );
        }
        // Truncation to the declared precision.
        let short = RotationNumber::decimal("0.61803398", 4).unwrap();
        assert_eq!(short.to_string(), "dec:0.618:4");
    }
}
