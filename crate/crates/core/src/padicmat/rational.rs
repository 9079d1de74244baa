use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// p-adic valuation with `+∞` for zero. `Infinity` orders above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn at_least(self, bound: i64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn checked(x: Option<i128>) -> i128 {
    x.expect("PadicRational overflow")
}

pub(crate) fn ipow(p: u32, e: u32) -> i128 {
    checked((p as i128).checked_pow(e))
}

/// `x^{-1} mod m` for `gcd(x, m) = 1`, `m ≥ 1`.
pub(crate) fn inv_mod_i128(x: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (x.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m)
}

pub(crate) fn mul_mod(a: i128, b: i128, m: i128) -> i128 {
    match a.checked_mul(b) {
        Some(x) => x.rem_euclid(m),
        None => {
            // double-and-add fallback, only reached for large moduli
            let (mut acc, mut base, mut e) = (0i128, a.rem_euclid(m), b.rem_euclid(m));
            while e > 0 {
                if e & 1 == 1 {
                    acc = (acc + base) % m;
                }
                base = (base + base) % m;
                e >>= 1;
            }
            acc
        }
    }
}

/// An exact rational number viewed inside `Q_p`: `num / den` in lowest
/// terms with `den > 0`. Denominators prime to `p` are allowed, so units
/// such as `1/3` in `Z_5` are represented exactly.
#[derive(Clone, Copy)]
pub struct PadicRational {
    p: u32,
    num: i128,
    den: i128,
}

impl PadicRational {
    pub fn new(p: u32, num: i128, den: i128) -> PadicRational {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        let (mut num, mut den) = if g == 0 { (0, 1) } else { (num / g, den / g) };
        if den < 0 {
            num = -num;
            den = -den;
        }
        if num == 0 {
            den = 1;
        }
        PadicRational { p, num, den }
    }

    pub fn from_int(p: u32, n: i128) -> PadicRational {
        PadicRational { p, num: n, den: 1 }
    }

    pub fn zero(p: u32) -> PadicRational {
        PadicRational::from_int(p, 0)
    }

    pub fn one(p: u32) -> PadicRational {
        PadicRational::from_int(p, 1)
    }

    /// `p^e` for any integer `e`.
    pub fn p_power(p: u32, e: i64) -> PadicRational {
        if e >= 0 {
            PadicRational::from_int(p, ipow(p, e as u32))
        } else {
            PadicRational { p, num: 1, den: ipow(p, (-e) as u32) }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 && self.den == 1
    }

    fn vp(mut n: i128, p: u32) -> i64 {
        let p = p as i128;
        let mut v = 0;
        while n != 0 && n % p == 0 {
            n /= p;
            v += 1;
        }
        v
    }

    pub fn valuation(&self) -> Valuation {
        if self.num == 0 {
            Valuation::Infinity
        } else {
            Valuation::Finite(Self::vp(self.num, self.p) - Self::vp(self.den, self.p))
        }
    }

    /// `v(x) ≥ 0`.
    pub fn is_integral(&self) -> bool {
        self.valuation().at_least(0)
    }

    /// `v(x) = 0`.
    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// True when the denominator is a power of `p` (the element lies in `Z[1/p]`).
    pub fn in_z_one_over_p(&self) -> bool {
        let mut d = self.den;
        while d % self.p as i128 == 0 {
            d /= self.p as i128;
        }
        d == 1
    }

    fn same_p(&self, other: &PadicRational) {
        assert_eq!(self.p, other.p, "PadicRational prime mismatch");
    }

    pub fn inv(&self) -> Result<PadicRational> {
        if self.num == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(PadicRational::new(self.p, self.den, self.num))
    }

    pub fn div(&self, other: &PadicRational) -> Result<PadicRational> {
        Ok(*self * other.inv()?)
    }

    /// Residue class in `Z/p^level` of an integral element.
    pub fn residue(&self, level: u32) -> Result<i128> {
        if !self.is_integral() {
            return Err(Error::NotIntegral(format!("{self} has negative valuation")));
        }
        let m = ipow(self.p, level);
        // p-power factors of the denominator are cancelled by the numerator
        let v_den = Self::vp(self.den, self.p);
        let p_part = ipow(self.p, v_den as u32);
        let num = self.num / p_part;
        let den = self.den / p_part;
        Ok(mul_mod(num.rem_euclid(m), inv_mod_i128(den, m), m))
    }

    /// Unit part `x / p^{v(x)}`.
    pub fn unit_part(&self) -> Option<PadicRational> {
        let v = self.valuation().finite()?;
        Some(*self * PadicRational::p_power(self.p, -v))
    }

    /// Canonical representative of the class of `self` in `Q_p / p^d Z_p`:
    /// `c / p^e` with `e = max(0, -v)`, `0 ≤ c < p^{d+e}`, or zero.
    pub fn reduce_mod_p_power(&self, d: i64) -> PadicRational {
        let v = match self.valuation() {
            Valuation::Infinity => return PadicRational::zero(self.p),
            Valuation::Finite(v) => v,
        };
        if v >= d {
            return PadicRational::zero(self.p);
        }
        let e = (-v).max(0);
        let shifted = *self * PadicRational::p_power(self.p, e);
        let c = shifted.residue((d + e) as u32).expect("shifted value is integral");
        PadicRational::new(self.p, c, ipow(self.p, e as u32))
    }

    /// `"c"` for integers, `"c/p^e"` (with `p` written out) for `Z[1/p]`, else `"n/d"`.
    pub fn to_literal(&self) -> String {
        if self.den == 1 {
            return format!("{}", self.num);
        }
        if self.in_z_one_over_p() {
            let e = Self::vp(self.den, self.p);
            return format!("{}/{}^{}", self.num, self.p, e);
        }
        format!("{}/{}", self.num, self.den)
    }
}

impl PartialEq for PadicRational {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.num == other.num && self.den == other.den
    }
}
impl Eq for PadicRational {}

impl Hash for PadicRational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl Ord for PadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        // den > 0, so cross-multiplication preserves order
        match (self.num.checked_mul(other.den), other.num.checked_mul(self.den)) {
            (Some(l), Some(r)) => l.cmp(&r).then(self.p.cmp(&other.p)),
            _ => (self.num as f64 / self.den as f64)
                .partial_cmp(&(other.num as f64 / other.den as f64))
                .unwrap_or(Ordering::Equal)
                .then(self.num.cmp(&other.num))
                .then(self.den.cmp(&other.den)),
        }
    }
}

impl PartialOrd for PadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl fmt::Display for PadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl Add for PadicRational {
    type Output = PadicRational;
    fn add(self, rhs: PadicRational) -> PadicRational {
        self.same_p(&rhs);
        if self.den == rhs.den {
            return PadicRational::new(self.p, checked(self.num.checked_add(rhs.num)), self.den);
        }
        let g = gcd(self.den, rhs.den);
        let l = self.den / g;
        let r = rhs.den / g;
        let num = checked(checked(self.num.checked_mul(r)).checked_add(checked(rhs.num.checked_mul(l))));
        PadicRational::new(self.p, num, checked(l.checked_mul(rhs.den)))
    }
}

impl Sub for PadicRational {
    type Output = PadicRational;
    fn sub(self, rhs: PadicRational) -> PadicRational {
        self + (-rhs)
    }
}

impl Neg for PadicRational {
    type Output = PadicRational;
    fn neg(self) -> PadicRational {
        PadicRational { p: self.p, num: -self.num, den: self.den }
    }
}

impl Mul for PadicRational {
    type Output = PadicRational;
    fn mul(self, rhs: PadicRational) -> PadicRational {
        self.same_p(&rhs);
        if self.num == 0 || rhs.num == 0 {
            return PadicRational::zero(self.p);
        }
        let g1 = gcd(self.num, rhs.den);
        let g2 = gcd(rhs.num, self.den);
        let num = checked((self.num / g1).checked_mul(rhs.num / g2));
        let den = checked((self.den / g2).checked_mul(rhs.den / g1));
        PadicRational::new(self.p, num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(PadicRational::new(5, 25, 3).valuation(), Valuation::Finite(2));
        assert_eq!(PadicRational::new(5, 3, 125).valuation(), Valuation::Finite(-3));
        assert_eq!(PadicRational::zero(5).valuation(), Valuation::Infinity);
        assert!(Valuation::Infinity > Valuation::Finite(i64::MAX));
    }

    #[test]
    fn inverse_lift_reduces_correctly() {
        let three = PadicRational::from_int(5, 3);
        let inv = three.inv().unwrap();
        assert_eq!(inv.valuation(), Valuation::Finite(0));
        assert_eq!(inv.residue(1).unwrap(), 2);
    }

    #[test]
    fn reduce_mod_p_power() {
        let p = 3;
        let x = PadicRational::new(p, 10, 9); // 1 + 1/9
        assert_eq!(x.reduce_mod_p_power(0), PadicRational::new(p, 1, 9));
        assert_eq!(x.reduce_mod_p_power(1), x);
        assert_eq!(PadicRational::from_int(p, 7).reduce_mod_p_power(1), PadicRational::from_int(p, 1));
        assert_eq!(PadicRational::new(p, 1, 2).reduce_mod_p_power(1), PadicRational::from_int(p, 2));
        assert!(PadicRational::new(p, 1, 9).reduce_mod_p_power(-2).is_zero());
    }

    #[test]
    fn literals() {
        assert_eq!(PadicRational::new(5, 1, 5).to_literal(), "1/5^1");
        assert_eq!(PadicRational::new(5, -3, 1).to_literal(), "-3");
        assert_eq!(PadicRational::new(5, 2, 3).to_literal(), "2/3");
    }
}
