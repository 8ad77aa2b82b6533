//! Exact arithmetic in a real quadratic field.
//!
//! A [`QuadSurd`] is the number `(p + q·√d) / c` with 128-bit integer
//! coefficients. Every operation the circle-rotation code needs (sums,
//! integer multiples, floors, comparisons, reciprocals) is exact, so
//! half-open interval membership is decided without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::{Integer, Roots};

/// `(p + q·√d) / c` with `c > 0`, reduced by `gcd(p, q, c)`.
///
/// Rationals have `q == 0` and `d == 0`. Values combined by arithmetic must
/// share the radicand unless one of them is rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    p: i128,
    q: i128,
    c: i128,
    d: i128,
}

fn isqrt(n: u128) -> u128 {
    Roots::sqrt(&n)
}

/// Square root of a non-negative integer if it is a perfect square.
fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u128) as i128;
    (r * r == n).then_some(r)
}

impl QuadSurd {
    /// Build `(p + q·√d) / c`. Perfect-square radicands collapse to rationals.
    ///
    /// Panics if `c == 0` or `d < 0`.
    pub fn new(p: i128, q: i128, c: i128, d: i128) -> Self {
        assert!(c != 0, "zero denominator");
        assert!(d >= 0, "negative radicand");
        let (mut p, mut q, mut d) = (p, q, d);
        if q != 0 {
            if let Some(r) = exact_sqrt(d) {
                p += q * r;
                q = 0;
            }
        }
        if q == 0 {
            d = 0;
        }
        let (mut p, mut q, mut c) = (p, q, c);
        if c < 0 {
            p = -p;
            q = -q;
            c = -c;
        }
        let g = p.gcd(&q).gcd(&c);
        if g > 1 {
            p /= g;
            q /= g;
            c /= g;
        }
        QuadSurd { p, q, c, d }
    }

    pub fn integer(n: i128) -> Self {
        QuadSurd {
            p: n,
            q: 0,
            c: 1,
            d: 0,
        }
    }

    pub fn rational(num: i128, den: i128) -> Self {
        Self::new(num, 0, den, 0)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0
    }

    pub fn radicand(&self) -> i128 {
        self.d
    }

    /// Coefficients `(p, q, c, d)` of the reduced form.
    pub fn parts(&self) -> (i128, i128, i128, i128) {
        (self.p, self.q, self.c, self.d)
    }

    fn shared_radicand(&self, other: &Self) -> i128 {
        match (self.q == 0, other.q == 0) {
            (true, _) => other.d,
            (_, true) => self.d,
            _ => {
                assert_eq!(self.d, other.d, "mixing different quadratic fields");
                self.d
            }
        }
    }

    /// Sign of `p + q·√d` (and hence of the value, as `c > 0`).
    pub fn signum(&self) -> i32 {
        let sp = self.p.signum();
        let sq = self.q.signum();
        if sq == 0 || sp == sq {
            return if sp != 0 { sp as i32 } else { sq as i32 };
        }
        if sp == 0 {
            return sq as i32;
        }
        // Opposite signs: compare p^2 with q^2 d.
        let lhs = self.p * self.p;
        let rhs = self.q * self.q * self.d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sp as i32,
            Ordering::Less => sq as i32,
            Ordering::Equal => 0,
        }
    }

    /// `floor(q·√d)` computed exactly.
    fn floor_irrational_part(&self) -> i128 {
        if self.q == 0 {
            return 0;
        }
        let s = isqrt((self.q * self.q * self.d) as u128) as i128;
        if self.q > 0 {
            s
        } else {
            // d is never a perfect square here, so q·√d is not an integer.
            -(s + 1)
        }
    }

    pub fn floor(&self) -> i128 {
        (self.p + self.floor_irrational_part()).div_euclid(self.c)
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Self {
        *self - Self::integer(self.floor())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.signum() == 0 {
            return None;
        }
        if self.q == 0 {
            return Some(Self::new(self.c, 0, self.p, 0));
        }
        // c / (p + q√d) = c (p − q√d) / (p² − q² d)
        let norm = self.p * self.p - self.q * self.q * self.d;
        Some(Self::new(self.c * self.p, -self.c * self.q, norm, self.d))
    }

    /// Nearest double. Cancellation between `p` and `q·√d` is avoided by
    /// switching to the conjugate form.
    pub fn to_f64(&self) -> f64 {
        if self.q == 0 {
            return self.p as f64 / self.c as f64;
        }
        let root = (self.d as f64).sqrt();
        let (p, q, c) = (self.p as f64, self.q as f64, self.c as f64);
        if self.p.signum() * self.q.signum() < 0 {
            let norm = (self.p * self.p - self.q * self.q * self.d) as f64;
            norm / (c * (p - q * root))
        } else {
            (p + q * root) / c
        }
    }
}

impl Add for QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: Self) -> Self {
        let d = self.shared_radicand(&rhs);
        let l = self.c.lcm(&rhs.c);
        let (ka, kb) = (l / self.c, l / rhs.c);
        QuadSurd::new(self.p * ka + rhs.p * kb, self.q * ka + rhs.q * kb, l, d)
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> Self {
        QuadSurd {
            p: -self.p,
            q: -self.q,
            ..self
        }
    }
}

impl Sub for QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul<i128> for QuadSurd {
    type Output = QuadSurd;
    fn mul(self, k: i128) -> Self {
        QuadSurd::new(self.p * k, self.q * k, self.c, self.d)
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            if self.c == 1 {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.c)
            }
        } else {
            let sign = if self.q < 0 { '-' } else { '+' };
            write!(
                f,
                "({}{}{}*sqrt{})/{}",
                self.p,
                sign,
                self.q.abs(),
                self.d,
                self.c
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> QuadSurd {
        QuadSurd::new(-1, 1, 2, 5)
    }

    #[test]
    fn golden_basics() {
        let g = golden();
        assert!((g.to_f64() - 0.6180339887498949).abs() < 1e-15);
        assert_eq!(g.floor(), 0);
        assert_eq!((g * 3).floor(), 1);
        assert_eq!((g * -1).floor(), -1);
        // 1/φ = φ + 1
        assert_eq!(g.recip().unwrap(), g + QuadSurd::one());
    }

    #[test]
    fn perfect_square_collapses() {
        let x = QuadSurd::new(1, 2, 3, 9);
        assert!(x.is_rational());
        assert_eq!(x, QuadSurd::rational(7, 3));
    }

    #[test]
    fn ordering_is_exact() {
        let g = golden();
        let one_minus = QuadSurd::one() - g;
        assert!(one_minus < g);
        assert_eq!((g - g).signum(), 0);
        assert!(QuadSurd::rational(618, 1000) < g);
        assert!(QuadSurd::rational(619, 1000) > g);
    }

    #[test]
    fn large_multiples_stay_exact() {
        let g = golden();
        let k = 1_000_000_007i128;
        assert_eq!((g * k).floor(), 618_033_993);
        let frac = (g * k).fract().to_f64();
        assert!((frac - 0.0761327694538508).abs() < 1e-9, "{frac}");
    }

    #[test]
    fn fract_of_negative() {
        let g = golden();
        let x = (g * -2).fract();
        assert!((x.to_f64() - (1.0 - (2.0 * 0.6180339887498949 - 1.0))).abs() < 1e-12);
    }
}
