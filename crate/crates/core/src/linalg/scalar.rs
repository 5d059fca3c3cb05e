use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element of Q(i): a complex number with arbitrary-precision rational
/// real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GScalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl GScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GScalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GScalar::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GScalar::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    /// `re_num/re_den + (im_num/im_den) i`
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GScalar::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn i() -> Self {
        GScalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        GScalar::default()
    }

    pub fn one() -> Self {
        GScalar::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GScalar::new(self.re.clone(), -self.im.clone())
    }

    /// |s|^2, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(GScalar::new(&self.re / &d, -(&self.im / &d)))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GScalar::new(&self.re * r, &self.im * r)
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        if n.unsigned_abs() < (1u64 << 53) && d < (1i64 << 53) {
            return n as f64 / d as f64;
        }
    }
    r.to_f64().unwrap_or(f64::NAN)
}

/// Canonical text for a rational: `p` when integral, else `p/q` in lowest terms.
pub fn format_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, `p/q` (no decimals, no spaces inside).
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str, signed: bool| {
        let digits = if signed {
            t.strip_prefix(['-', '+']).unwrap_or(t)
        } else {
            t
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return None;
    }
    let num: BigInt = num.trim_start_matches('+').parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl FromStr for GScalar {
    type Err = String;

    /// Accepts forms like `1`, `-3/4`, `i`, `-i`, `2i`, `1/4i`, `1/2+1/4i`, `3-i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err("empty scalar".into());
        }
        // Split into signed terms at '+'/'-' that are not leading.
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for idx in 1..bytes.len() {
            if (bytes[idx] == b'+' || bytes[idx] == b'-') && bytes[idx - 1] != b'/' {
                terms.push(&compact[start..idx]);
                start = idx;
            }
        }
        terms.push(&compact[start..]);
        if terms.len() > 2 {
            return Err(format!("too many terms in scalar `{s}`"));
        }
        let mut out = GScalar::zero();
        let mut seen_re = false;
        let mut seen_im = false;
        for term in terms {
            if let Some(body) = term.strip_suffix('i') {
                if seen_im {
                    return Err(format!("duplicate imaginary part in `{s}`"));
                }
                seen_im = true;
                let body = match body {
                    "" | "+" => "1",
                    "-" => "-1",
                    b => b,
                };
                out.im = parse_ratio(body).ok_or_else(|| format!("bad imaginary part in `{s}`"))?;
            } else {
                if seen_re {
                    return Err(format!("duplicate real part in `{s}`"));
                }
                seen_re = true;
                out.re = parse_ratio(term).ok_or_else(|| format!("bad real part in `{s}`"))?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_ratio(&self.re)),
            (true, false) => write!(f, "{}i", format_ratio(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{}{}{}i",
                    format_ratio(&self.re),
                    sign,
                    format_ratio(&self.im.abs())
                )
            }
        }
    }
}

impl fmt::Debug for GScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for GScalar {
    fn from(n: i64) -> Self {
        GScalar::from_int(n)
    }
}

impl From<BigRational> for GScalar {
    fn from(r: BigRational) -> Self {
        GScalar::new(r, BigRational::zero())
    }
}

impl<'a> Add<&'a GScalar> for &'a GScalar {
    type Output = GScalar;
    fn add(self, rhs: &'a GScalar) -> GScalar {
        GScalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GScalar> for &'a GScalar {
    type Output = GScalar;
    fn sub(self, rhs: &'a GScalar) -> GScalar {
        GScalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GScalar> for &'a GScalar {
    type Output = GScalar;
    fn mul(self, rhs: &'a GScalar) -> GScalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GScalar::new(&self.re * &rhs.re, BigRational::zero());
        }
        GScalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a GScalar> for &'a GScalar {
    type Output = GScalar;
    fn div(self, rhs: &'a GScalar) -> GScalar {
        let inv = rhs.inv().expect("division by zero GScalar");
        self * &inv
    }
}

impl<'a> Neg for &'a GScalar {
    type Output = GScalar;
    fn neg(self) -> GScalar {
        GScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GScalar {
    type Output = GScalar;
    fn neg(self) -> GScalar {
        GScalar::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GScalar> for GScalar {
            type Output = GScalar;
            fn $m(self, rhs: GScalar) -> GScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GScalar> for GScalar {
            type Output = GScalar;
            fn $m(self, rhs: &'a GScalar) -> GScalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<'a> AddAssign<&'a GScalar> for GScalar {
    fn add_assign(&mut self, rhs: &'a GScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a GScalar> for GScalar {
    fn sub_assign(&mut self, rhs: &'a GScalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let g: GScalar = "1/2+1/4i".parse().unwrap();
        assert_eq!(g, GScalar::from_parts(1, 2, 1, 4));
        assert_eq!("-i".parse::<GScalar>().unwrap(), -GScalar::i());
        assert_eq!(
            "3-2i".parse::<GScalar>().unwrap(),
            GScalar::from_parts(3, 1, -2, 1)
        );
        assert_eq!(
            "-3/6".parse::<GScalar>().unwrap(),
            GScalar::from_ratio(-1, 2)
        );
        assert_eq!("1/-4i".parse::<GScalar>().is_err(), true);
        assert!("0.5".parse::<GScalar>().is_err());
        assert!("1/0".parse::<GScalar>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "7", "-1/3", "2i", "-1/2i", "1/2+1/4i", "3-5/7i"] {
            let g: GScalar = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
            assert_eq!(g.to_string().parse::<GScalar>().unwrap(), g);
        }
    }

    #[test]
    fn field_operations() {
        let a = GScalar::from_parts(1, 2, -3, 1);
        let b = GScalar::from_parts(2, 3, 1, 5);
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv().unwrap(), GScalar::one());
        assert_eq!(a.conj().conj(), a);
        assert_eq!(&GScalar::i() * &GScalar::i(), GScalar::from_int(-1));
        assert!(GScalar::zero().inv().is_none());
    }
}
