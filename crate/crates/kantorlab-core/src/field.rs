//! Exact scalars over `Q` or a prime field `GF(p)`, `p >= 5`.
//!
//! Rationals are arbitrary-precision and always kept in lowest terms with a
//! positive denominator; residues are kept in `0..p`. The lower bound on `p`
//! keeps `1/6` available, which the pair theory needs throughout.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// The ground field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Gf(u64),
}

impl Field {
    /// Parses `"q"` / `"Q"` or `"gf:<p>"` / `"GF(p)"`.
    pub fn parse(s: &str) -> crate::Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Q);
        }
        let inner = t
            .strip_prefix("gf:")
            .or_else(|| t.strip_prefix("GF:"))
            .or_else(|| {
                t.strip_prefix("GF(")
                    .and_then(|r| r.strip_suffix(')'))
            })
            .or_else(|| t.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')));
        match inner {
            Some(p) => {
                let p: u64 = p
                    .parse()
                    .map_err(|_| crate::Error::Parse(format!("bad field spec {t:?}")))?;
                Field::gf(p)
            }
            None => Err(crate::Error::Parse(format!("bad field spec {t:?}"))),
        }
    }

    /// A prime field; rejects `p < 5` (no `1/6`) and composite moduli.
    pub fn gf(p: u64) -> crate::Result<Field> {
        if p < 5 {
            return Err(crate::Error::Field(format!(
                "GF({p}) rejected: characteristic must be 0 or >= 5 so that 1/6 exists"
            )));
        }
        if !is_prime(p) {
            return Err(crate::Error::Field(format!("{p} is not prime")));
        }
        Ok(Field::Gf(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Gf(p) => Scalar::Gf { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Gf(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Gf { p: *p, v: r }
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Gf(p) => *p,
        }
    }

    /// Parses the canonical string form: `"a/b"` or `"a"` over Q, a residue over GF(p).
    pub fn parse_scalar(&self, s: &str) -> crate::Result<Scalar> {
        match self {
            Field::Q => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| crate::Error::Parse(format!("bad rational {s:?}")))?;
                let d: BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| crate::Error::Parse(format!("bad rational {s:?}")))?;
                if d.is_zero() {
                    return Err(crate::Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar::Q(BigRational::new(n, d)))
            }
            Field::Gf(_) => {
                let v: i64 = s
                    .trim()
                    .parse()
                    .map_err(|_| crate::Error::Parse(format!("bad residue {s:?}")))?;
                Ok(self.from_i64(v))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Gf(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Mixing elements of different fields panics: that is
/// a programming error, not a data error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Q(BigRational),
    Gf { p: u64, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Gf { p, .. } => Field::Gf(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Gf { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Gf { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Gf { p, v }, Scalar::Gf { p: q, v: w }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Gf { p: *p, v: (v + w) % p }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Gf { p, v } => Scalar::Gf { p: *p, v: (p - v) % p },
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Gf { p, v }, Scalar::Gf { p: q, v: w }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Gf { p: *p, v: ((*v as u128 * *w as u128) % *p as u128) as u64 }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Gf { p, v } => Scalar::Gf { p: *p, v: mod_inv(*v, *p) },
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self.mul(&rhs.inv())
    }

    /// Adds `c * x` into `self` in place; skips work when either factor is zero.
    pub fn add_mul_assign(&mut self, c: &Scalar, x: &Scalar) {
        if c.is_zero() || x.is_zero() {
            return;
        }
        *self = self.add(&c.mul(x));
    }

    /// Canonical serialization: `"a/b"` (or `"a"` when `b == 1`) over Q,
    /// the representative in `0..p` over GF(p).
    pub fn to_canonical_string(&self) -> String {
        format!("{self}")
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible");
    t.rem_euclid(p as i128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else if r.denom().is_negative() {
                    // BigRational keeps denom positive, but guard anyway
                    write!(f, "{}/{}", -r.numer(), -r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Gf { v, .. } => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_reduces() {
        let f = Field::Q;
        let half = f.parse_scalar("2/4").unwrap();
        assert_eq!(half.to_canonical_string(), "1/2");
        let third = f.parse_scalar("1/3").unwrap();
        let sum = half.add(&third);
        assert_eq!(sum.to_canonical_string(), "5/6");
        assert_eq!(sum.mul(&f.from_i64(6)).to_canonical_string(), "5");
        assert_eq!(f.parse_scalar("-3/-6").unwrap().to_canonical_string(), "1/2");
    }

    #[test]
    fn gf_arithmetic() {
        let f = Field::gf(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(a.mul(&b).to_canonical_string(), "1");
        assert_eq!(a.inv().to_canonical_string(), "5");
        assert_eq!(f.from_i64(-1).to_canonical_string(), "6");
        let sixth = f.from_i64(6).inv();
        assert_eq!(sixth.mul(&f.from_i64(6)), f.one());
    }

    #[test]
    fn small_characteristics_rejected() {
        assert!(Field::gf(2).is_err());
        assert!(Field::gf(3).is_err());
        assert!(Field::gf(9).is_err());
        assert!(Field::gf(5).is_ok());
    }

    #[test]
    fn field_parsing() {
        assert_eq!(Field::parse("q").unwrap(), Field::Q);
        assert_eq!(Field::parse("gf:11").unwrap(), Field::Gf(11));
        assert_eq!(Field::parse("GF(5)").unwrap(), Field::Gf(5));
        assert!(Field::parse("gf:4").is_err());
    }
}
