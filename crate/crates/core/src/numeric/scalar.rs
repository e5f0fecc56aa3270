//! The two scalar domains: exact rationals and multiprecision complex floats.
//!
//! Code that is generic over [`Scalar`] runs in either domain; the type system
//! keeps the two from mixing inside one computation. Conversions are explicit
//! (`to_cfloat`, `from_rational`).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::{CompleteRound, Pow};
use rug::{Complex, Float, Rational};

/// Mantissa bits used when nothing else is configured.
pub const DEFAULT_PRECISION: u32 = 53;
/// Mantissa bits used by the degeneration pipeline.
pub const PIPELINE_PRECISION: u32 = 256;

/// Precision given to small integer constants. Every `i64` is exact at this
/// width, and arithmetic always runs at the wider operand's precision, so
/// constants never degrade data-carrying values.
const CONSTANT_PRECISION: u32 = 64;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// True for the error-free rational domain.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational, prec: u32) -> Self;
    fn is_zero(&self) -> bool;
    /// Modulus as an `f64`, for tolerance tests and diagnostics.
    fn abs_f64(&self) -> f64;
    fn conj(&self) -> Self;
    fn to_cfloat(&self, prec: u32) -> CFloat;
    /// Mantissa bits, or `None` in the exact domain.
    fn precision(&self) -> Option<u32>;
    /// Exact conversion from a complex float when the domain can hold it.
    fn from_cfloat(c: &CFloat) -> Option<Self>;
    /// `"p/q"` in the exact domain, `{"re", "im"}` decimal strings otherwise.
    fn to_json(&self) -> serde_json::Value;

    /// Exact zero test in the rational domain, `|x| <= tol` otherwise.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs_f64() <= tol
        }
    }

    fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }

    fn inv(&self) -> Self {
        Self::one() / self
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from(v)
    }
    fn from_rational(q: &Rational, _prec: u32) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn to_cfloat(&self, prec: u32) -> CFloat {
        CFloat(Complex::with_val(prec, self))
    }
    fn precision(&self) -> Option<u32> {
        None
    }
    fn from_cfloat(c: &CFloat) -> Option<Self> {
        if c.im().is_zero() {
            c.re().to_rational()
        } else {
            None
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(rational_to_string(self))
    }
}

/// A complex number with an explicit mantissa width.
#[derive(Clone, PartialEq)]
pub struct CFloat(pub Complex);

impl CFloat {
    pub fn new(prec: u32, re: f64, im: f64) -> Self {
        CFloat(Complex::with_val(prec, (re, im)))
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        CFloat(Complex::with_val(prec, (re, im)))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec().0.max(self.0.prec().1)
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn re_f64(&self) -> f64 {
        self.0.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.0.imag().to_f64()
    }

    /// Modulus at full precision.
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.0.abs_ref())
    }

    pub fn sqrt(&self) -> CFloat {
        CFloat(Complex::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn with_prec(&self, prec: u32) -> CFloat {
        CFloat(Complex::with_val(prec, &self.0))
    }

    /// `r * exp(i theta)` at the given precision.
    pub fn polar(prec: u32, r: &Float, theta: f64) -> CFloat {
        let t = Float::with_val(prec, theta);
        let (s, c) = t.sin_cos(Float::new(prec));
        let re = Float::with_val(prec, r * &c);
        let im = Float::with_val(prec, r * &s);
        CFloat::from_parts(re, im)
    }

    pub fn from_real(x: Float) -> CFloat {
        let prec = x.prec();
        CFloat(Complex::with_val(prec, (x, 0)))
    }

    /// Lexicographic order on (real part, imaginary part).
    pub fn lex_cmp(&self, other: &CFloat) -> Ordering {
        match self.re().partial_cmp(other.re()) {
            Some(Ordering::Equal) | None => self
                .im()
                .partial_cmp(other.im())
                .unwrap_or(Ordering::Equal),
            Some(o) => o,
        }
    }

    /// Decimal rendering `re,im` with a fixed number of significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        let fmt = |x: &Float| -> String {
            if x.is_zero() {
                "0".to_string()
            } else {
                x.to_string_radix_round(10, Some(digits), Round::Nearest)
            }
        };
        (fmt(self.re()), fmt(self.im()))
    }

    /// Parse a real decimal or `p/q` string into a float of the given width.
    pub fn parse_real(s: &str, prec: u32) -> Option<CFloat> {
        if let Ok(q) = s.trim().parse::<Rational>() {
            return Some(CFloat(Complex::with_val(prec, &q)));
        }
        let f = Float::parse(s.trim()).ok()?.complete(prec);
        Some(CFloat::from_real(f))
    }
}

impl fmt::Debug for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal(12);
        write!(f, "({re}, {im})")
    }
}

impl fmt::Display for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

macro_rules! cfloat_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for CFloat {
            type Output = CFloat;
            fn $method(self, rhs: CFloat) -> CFloat {
                let p = self.prec().max(rhs.prec());
                CFloat(Complex::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl<'a> $tr<&'a CFloat> for CFloat {
            type Output = CFloat;
            fn $method(self, rhs: &'a CFloat) -> CFloat {
                let p = self.prec().max(rhs.prec());
                CFloat(Complex::with_val(p, &self.0 $op &rhs.0))
            }
        }
    };
}

cfloat_binop!(Add, add, +);
cfloat_binop!(Sub, sub, -);
cfloat_binop!(Mul, mul, *);
cfloat_binop!(Div, div, /);

impl Neg for CFloat {
    type Output = CFloat;
    fn neg(self) -> CFloat {
        CFloat(-self.0)
    }
}

impl Scalar for CFloat {
    const EXACT: bool = false;

    fn zero() -> Self {
        CFloat(Complex::new(CONSTANT_PRECISION))
    }
    fn one() -> Self {
        CFloat(Complex::with_val(CONSTANT_PRECISION, 1))
    }
    fn from_i64(v: i64) -> Self {
        CFloat(Complex::with_val(CONSTANT_PRECISION, v))
    }
    fn from_rational(q: &Rational, prec: u32) -> Self {
        CFloat(Complex::with_val(prec, q))
    }
    fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }
    fn abs_f64(&self) -> f64 {
        self.0.real().to_f64().hypot(self.0.imag().to_f64())
    }
    fn conj(&self) -> Self {
        CFloat(Complex::with_val(self.prec(), self.0.conj_ref()))
    }
    fn to_cfloat(&self, prec: u32) -> CFloat {
        self.with_prec(prec)
    }
    fn precision(&self) -> Option<u32> {
        Some(self.prec())
    }
    fn from_cfloat(c: &CFloat) -> Option<Self> {
        Some(c.clone())
    }
    fn to_json(&self) -> serde_json::Value {
        let digits = (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize;
        let (re, im) = self.to_decimal(digits.max(17));
        serde_json::json!({"re": re, "im": im})
    }
}

/// Canonical `p/q` rendering of an exact rational.
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `p/q`, `p`, or a terminating decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Ok(q) = s.parse::<Rational>() {
        return Some(q);
    }
    // terminating decimal such as "0.1" or "-1.5e-3", read exactly
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: rug::Integer = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = rug::Integer::from(10);
    let mut q = Rational::from(all);
    if scale >= 0 {
        q *= Rational::from(ten.pow(scale as u32));
    } else {
        q /= Rational::from(ten.pow((-scale) as u32));
    }
    Some(if neg { -q } else { q })
}

/// Smallest mantissa width accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 53;

/// Default tolerance attached to a working precision: `2^(-prec/2)`.
pub fn default_tolerance(prec: u32) -> f64 {
    2f64.powf(-(prec as f64) / 2.0).max(1e-300)
}

/// Unit roundoff `2^(-prec)`.
pub fn unit_roundoff(prec: u32) -> f64 {
    2f64.powf(-(prec as f64)).max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_do_not_degrade_precision() {
        let x = CFloat::from_rational(&Rational::from((1, 3)), 256);
        let y = CFloat::one() + &x;
        assert_eq!(y.prec(), 256);
        let z = CFloat::from_i64(3) * y;
        assert_eq!(z.prec(), 256);
        let expect = CFloat::from_rational(&Rational::from(4), 256);
        assert!((z - expect).abs_f64() < 1e-70);
    }

    #[test]
    fn rational_parse_forms() {
        assert_eq!(parse_rational("3/4"), Some(Rational::from((3, 4))));
        assert_eq!(parse_rational("-2"), Some(Rational::from(-2)));
        assert_eq!(parse_rational("0.25"), Some(Rational::from((1, 4))));
        assert_eq!(parse_rational("0.1"), Some(Rational::from((1, 10))));
        assert_eq!(parse_rational("-1.5e-3"), Some(Rational::from((-3, 2000))));
        assert_eq!(rational_to_string(&Rational::from(5)), "5/1");
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn negligible_is_exact_in_rational_domain() {
        let tiny = Rational::from((1, 1_000_000_000));
        assert!(!tiny.is_negligible(1.0));
        assert!(Rational::zero().is_negligible(0.0));
        let f = CFloat::new(53, 1e-12, 0.0);
        assert!(f.is_negligible(1e-10));
    }
}
