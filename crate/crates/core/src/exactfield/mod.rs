//! Scalar arithmetic over the prime field F_p and small extensions F_{p^k}.
//!
//! A [`Field`] is an interned, immutable parameter set: the prime, the degree
//! and a monic irreducible modulus. Elements are `Copy` and carry a pointer to
//! their field, so arithmetic between elements of different fields is caught
//! at runtime (`try_*` methods return [`Error::FieldMismatch`], the operator
//! impls panic).

mod linalg;
mod sparse;

pub use linalg::{identity_matrix, kernel_basis, mat_mul, mat_vec, rank, solve_linear, LinearSolution, Matrix};
pub use sparse::{column_kernel, Echelon, Reduction, SparseVec};

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use serde_json::Value;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 4;
/// Largest supported prime.
pub const MAX_PRIME: u32 = 13;

#[derive(Debug, PartialEq, Eq)]
pub struct FieldParams {
    p: u32,
    k: usize,
    /// Monic modulus, low degree first, length `k + 1`.
    modulus: Vec<u32>,
}

/// Handle to an interned finite field `F_p[x]/(modulus)`.
#[derive(Clone, Copy)]
pub struct Field(&'static FieldParams);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}[{:?}]", self.0.p, self.0.k, self.0.modulus)
        }
    }
}

fn registry() -> &'static Mutex<Vec<&'static FieldParams>> {
    static REGISTRY: OnceLock<Mutex<Vec<&'static FieldParams>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(Vec::new()))
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn intern(params: FieldParams) -> Field {
    let mut reg = registry().lock().expect("field registry poisoned");
    if let Some(existing) = reg.iter().find(|f| ***f == params) {
        return Field(existing);
    }
    let leaked: &'static FieldParams = Box::leak(Box::new(params));
    reg.push(leaked);
    Field(leaked)
}

/// Polynomial helpers over F_p, coefficient vectors low degree first.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor") as u64, p as u64) as u32;
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bc) in b.iter().enumerate() {
            let sub = (factor as u64 * bc as u64) % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = poly_trim(r);
    }
    r
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=k/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut factor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                factor.push((c % p as u64) as u32);
                c /= p as u64;
            }
            factor.push(1);
            if poly_rem(modulus, &factor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "{a} not invertible mod {m}");
    old_s.rem_euclid(m as i128) as u64
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Field::extension(p, &[0, 1])
    }

    /// `F_p[x]/(modulus)`; `modulus` is monic, low degree first.
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Field> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::InvalidField(format!("p = {p} is not a supported prime (2..={MAX_PRIME})")));
        }
        let k = modulus.len().saturating_sub(1);
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::InvalidField(format!("degree {k} outside 1..={MAX_DEGREE}")));
        }
        if modulus[k] != 1 {
            return Err(Error::InvalidField("modulus is not monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must be reduced mod p".into()));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(intern(FieldParams { p, k, modulus: modulus.to_vec() }))
    }

    /// The extension of degree `k`, using the lexicographically first monic
    /// irreducible modulus.
    pub fn with_degree(p: u32, k: usize) -> Result<Field> {
        if k == 1 {
            return Field::prime(p);
        }
        if !is_prime(p) || p > MAX_PRIME || k == 0 || k > MAX_DEGREE {
            return Err(Error::InvalidField(format!("unsupported (p, k) = ({p}, {k})")));
        }
        let count = (p as u64).pow(k as u32);
        for code in 0..count {
            let mut m = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                m.push((c % p as u64) as u32);
                c /= p as u64;
            }
            m.push(1);
            if is_irreducible(&m, p) {
                return Field::extension(p, &m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn order(&self) -> u64 {
        (self.0.p as u64).pow(self.0.k as u32)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { field: *self, c: [0; MAX_DEGREE] }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// Image of an integer under `Z -> F_p -> F`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        let mut c = [0; MAX_DEGREE];
        c[0] = n.rem_euclid(self.0.p as i64) as u32;
        FieldElem { field: *self, c }
    }

    /// Element with the given coefficients (low degree first), reduced mod p.
    pub fn elem(&self, coeffs: &[i64]) -> Result<FieldElem> {
        if coeffs.len() > self.0.k {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.0.k
            )));
        }
        let mut c = [0; MAX_DEGREE];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = v.rem_euclid(self.0.p as i64) as u32;
        }
        Ok(FieldElem { field: *self, c })
    }

    /// Element whose base-p digits (least significant first) are its coefficients.
    pub fn from_code(&self, code: u64) -> FieldElem {
        let mut c = [0; MAX_DEGREE];
        let mut rest = code % self.order();
        for slot in c.iter_mut().take(self.0.k) {
            *slot = (rest % self.0.p as u64) as u32;
            rest /= self.0.p as u64;
        }
        FieldElem { field: *self, c }
    }

    /// All field elements, in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order()).map(move |code| self.from_code(code))
    }

    /// Smallest positive integer whose residue generates `F_p^×`.
    pub fn primitive_root(&self) -> u32 {
        primitive_root(self.0.p)
    }
}

pub fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let factors: Vec<u32> = (2..=order).filter(|d| order.is_multiple_of(*d) && is_prime(*d)).collect();
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g as u64, (order / q) as u64, p as u64) != 1))
        .expect("primitive roots exist mod a prime")
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// An element of a [`Field`].
#[derive(Clone, Copy)]
pub struct FieldElem {
    field: Field,
    c: [u32; MAX_DEGREE],
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.c == other.c
    }
}
impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl FieldElem {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c[..self.field.0.k]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// The residue as an integer in `0..p`, if the element lies in the prime field.
    pub fn as_prime(&self) -> Option<u32> {
        self.c[1..].iter().all(|&x| x == 0).then_some(self.c[0])
    }

    pub fn code(&self) -> u64 {
        let p = self.field.0.p as u64;
        self.coeffs().iter().rev().fold(0, |acc, &d| acc * p + d as u64)
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        let p = self.field.0.p;
        let mut c = [0; MAX_DEGREE];
        for (slot, (x, y)) in c.iter_mut().zip(self.c.iter().zip(&other.c)) {
            let s = x + y;
            *slot = if s >= p { s - p } else { s };
        }
        Ok(FieldElem { field: self.field, c })
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        let params = self.field.0;
        let p = params.p as u64;
        if params.k == 1 {
            let mut c = [0; MAX_DEGREE];
            c[0] = (self.c[0] as u64 * other.c[0] as u64 % p) as u32;
            return Ok(FieldElem { field: self.field, c });
        }
        let k = params.k;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] += self.c[i] as u64 * other.c[j] as u64;
            }
        }
        for x in prod.iter_mut() {
            *x %= p;
        }
        // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        for deg in (k..2 * k - 1).rev() {
            let top = prod[deg];
            if top == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in params.modulus[..k].iter().enumerate() {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - top) * m as u64) % p;
            }
        }
        let mut c = [0; MAX_DEGREE];
        for i in 0..k {
            c[i] = prod[i] as u32;
        }
        Ok(FieldElem { field: self.field, c })
    }

    pub fn pow(&self, mut exp: u64) -> FieldElem {
        let mut base = *self;
        let mut acc = self.field.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    pub fn try_inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.field.0.k == 1 {
            let p = self.field.0.p as u64;
            return Ok(self.field.from_int(inv_mod(self.c[0] as u64, p) as i64));
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn inv(&self) -> FieldElem {
        self.try_inv().expect("division by zero")
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.try_mul(&other.try_inv()?)
    }

    pub fn to_json(&self) -> Value {
        if self.field.0.k == 1 {
            Value::from(self.c[0])
        } else {
            Value::from(self.coeffs().to_vec())
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.0.k == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        self.try_add(&rhs).expect("field mismatch")
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        self.try_sub(&rhs).expect("field mismatch")
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        self.try_mul(&rhs).expect("field mismatch")
    }
}

impl Div for FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: FieldElem) -> FieldElem {
        self.try_div(&rhs).expect("field arithmetic")
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        let p = self.field.0.p;
        let mut c = [0; MAX_DEGREE];
        for (slot, &x) in c.iter_mut().zip(&self.c) {
            *slot = if x == 0 { 0 } else { p - x };
        }
        FieldElem { field: self.field, c }
    }
}

impl AddAssign for FieldElem {
    fn add_assign(&mut self, rhs: FieldElem) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElem {
    fn sub_assign(&mut self, rhs: FieldElem) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElem {
    fn mul_assign(&mut self, rhs: FieldElem) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_examples() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_int(2).inv(), f5.from_int(3));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.from_int(2) + f3.from_int(2), f3.from_int(1));
    }

    #[test]
    fn quadratic_extension_of_f2() {
        let f4 = Field::extension(2, &[1, 1, 1]).unwrap();
        let x = f4.elem(&[0, 1]).unwrap();
        assert_eq!(x * x, f4.elem(&[1, 1]).unwrap());
    }

    #[test]
    fn errors() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.zero().try_inv(), Err(Error::DivisionByZero));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f5.one().try_add(&f3.one()), Err(Error::FieldMismatch));
        assert!(Field::extension(2, &[0, 1, 1]).is_err(), "x^2 + x is reducible");
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(17).is_err());
    }

    #[test]
    fn interning_gives_equal_handles() {
        assert_eq!(Field::prime(7).unwrap(), Field::prime(7).unwrap());
        assert_eq!(Field::with_degree(3, 2).unwrap(), Field::with_degree(3, 2).unwrap());
    }

    #[test]
    fn every_nonzero_element_inverts() {
        for (p, k) in [(2, 3), (3, 2), (5, 2), (2, 4), (3, 4)] {
            let f = Field::with_degree(p, k).unwrap();
            for a in f.elements().filter(|a| !a.is_zero()) {
                assert!((a * a.inv()).is_one(), "{a:?} in {f:?}");
            }
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(2), 1);
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(13), 2);
    }
}
