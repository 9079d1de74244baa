//! Compact induction `c-Ind_{ZK}^G σ` as finite formal sums over tree
//! vertices, the Hecke operator `T`, and truncated quotient models
//! `c-Ind / (P(T))`.
//!
//! Elements are written `[g, v]` with `h·[g, v] = [hg, v]` and
//! `[gk, v] = [g, σ(k)v]` for `k ∈ ZK`; a vertex stands for its canonical
//! representative matrix.

mod quotient;

pub use quotient::{i1_fixed_ball, quotient_membership, Ball, Membership, QuotientModel, DEFAULT_R_MAX};

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactfield::{solve_linear, FieldElem, LinearSolution, Matrix};
use crate::fqweights::{i1_fixed_line, Weight};
use crate::padicmat::{tree_distance, unit_lift, vertex_normalize, Mat2, PadicRational, TreeVertex};

/// A finitely supported element of `c-Ind σ`.
#[derive(Clone, PartialEq, Eq)]
pub struct CindElement {
    weight: Weight,
    support: BTreeMap<TreeVertex, Vec<FieldElem>>,
}

impl fmt::Debug for CindElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.support.iter().map(|(v, c)| ((v.d, v.a), c.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
            )
            .finish()
    }
}

impl CindElement {
    pub fn zero(weight: Weight) -> CindElement {
        CindElement { weight, support: BTreeMap::new() }
    }

    /// `[rep(vertex), v]`.
    pub fn basis(weight: Weight, vertex: TreeVertex, v: Vec<FieldElem>) -> CindElement {
        let mut out = CindElement::zero(weight);
        out.add_at(vertex, &v);
        out
    }

    /// The generator `φ = [1, v₀]` with `v₀` spanning `σ^{I_1}`.
    pub fn phi(weight: Weight) -> Result<CindElement> {
        let (v0, _) = i1_fixed_line(&weight)?;
        Ok(CindElement::basis(weight, TreeVertex::base(weight.p()), v0))
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn support(&self) -> &BTreeMap<TreeVertex, Vec<FieldElem>> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Largest distance of a support vertex from the base vertex; `-1` for zero.
    pub fn radius(&self) -> i64 {
        self.support.keys().map(|v| v.distance()).max().unwrap_or(-1)
    }

    fn add_at(&mut self, vertex: TreeVertex, v: &[FieldElem]) {
        if v.iter().all(|x| x.is_zero()) {
            return;
        }
        let entry = self.support.entry(vertex).or_insert_with(|| self.weight.zero_vector());
        for (a, b) in entry.iter_mut().zip(v) {
            *a += *b;
        }
        if entry.iter().all(|x| x.is_zero()) {
            self.support.remove(&vertex);
        }
    }

    /// `[g, v]` for an arbitrary invertible `g`.
    pub fn translate(weight: Weight, g: &Mat2, v: &[FieldElem]) -> Result<CindElement> {
        let (vertex, kz) = vertex_normalize(g);
        Ok(CindElement::basis(weight, vertex, weight.act(&kz, v)?))
    }

    pub fn add(&self, other: &CindElement) -> CindElement {
        let mut out = self.clone();
        for (v, c) in &other.support {
            out.add_at(*v, c);
        }
        out
    }

    pub fn add_scaled(&self, other: &CindElement, c: FieldElem) -> CindElement {
        let mut out = self.clone();
        for (v, x) in &other.support {
            let scaled: Vec<FieldElem> = x.iter().map(|y| *y * c).collect();
            out.add_at(*v, &scaled);
        }
        out
    }

    pub fn sub(&self, other: &CindElement) -> CindElement {
        self.add_scaled(other, -self.weight.field().one())
    }

    pub fn scale(&self, c: FieldElem) -> CindElement {
        CindElement::zero(self.weight).add_scaled(self, c)
    }

    /// `g · f`.
    pub fn act(&self, g: &Mat2) -> CindElement {
        let mut out = CindElement::zero(self.weight);
        for (vertex, c) in &self.support {
            let (target, kz) = vertex_normalize(&(*g * vertex.matrix()));
            let coeff = self.weight.act(&kz, c).expect("KZ acts on the weight");
            out.add_at(target, &coeff);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.support
                .iter()
                .map(|(v, c)| json!({"vertex": v.to_json(), "coeffs": c.iter().map(|x| x.to_json()).collect::<Vec<_>>()}))
                .collect(),
        )
    }
}

/// `act(g, f)`.
pub fn act(g: &Mat2, f: &CindElement) -> CindElement {
    f.act(g)
}

/// The elements `u(ℓ_λ)·t` for `λ = 0, …, p-1`.
pub fn hecke_translates(p: u32) -> Vec<Mat2> {
    (0..p).map(|l| Mat2::upper(unit_lift(p, l)) * Mat2::t(p)).collect()
}

/// `Σ_λ u(ℓ_λ) t · f`.
pub fn hecke_sum(f: &CindElement) -> CindElement {
    hecke_translates(f.weight.p()).iter().fold(CindElement::zero(f.weight), |acc, g| acc.add(&f.act(g)))
}

/// A monic polynomial in `T` over the coefficient field.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeIdeal {
    /// Coefficients, constant term first; the last one is 1.
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for HeckeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

impl HeckeIdeal {
    pub fn new(coeffs: Vec<FieldElem>) -> Result<HeckeIdeal> {
        match coeffs.last() {
            Some(lead) if lead.is_one() && coeffs.len() >= 2 => Ok(HeckeIdeal { coeffs }),
            _ => Err(Error::InvalidConfig("Hecke polynomial must be monic of degree >= 1".into())),
        }
    }

    /// `T^n`.
    pub fn power(field: crate::exactfield::Field, n: usize) -> Result<HeckeIdeal> {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = field.one();
        HeckeIdeal::new(coeffs)
    }

    /// `T - λ`.
    pub fn linear(lambda: FieldElem) -> HeckeIdeal {
        HeckeIdeal { coeffs: vec![-lambda, lambda.field().one()] }
    }

    /// Parses `T`, `T^n`, `T-c` and `T+c` (`c` an element code).
    pub fn parse(field: crate::exactfield::Field, spec: &str) -> Result<HeckeIdeal> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidConfig(format!("cannot parse Hecke ideal {spec:?}"));
        let rest = s.strip_prefix('T').ok_or_else(bad)?;
        if rest.is_empty() {
            return HeckeIdeal::power(field, 1);
        }
        if let Some(n) = rest.strip_prefix('^') {
            let n: usize = n.parse().map_err(|_| bad())?;
            if n == 0 || n > 8 {
                return Err(bad());
            }
            return HeckeIdeal::power(field, n);
        }
        let (sign, num) = if let Some(n) = rest.strip_prefix('-') {
            (-1, n)
        } else if let Some(n) = rest.strip_prefix('+') {
            (1, n)
        } else {
            return Err(bad());
        };
        let code: u64 = num.parse().map_err(|_| bad())?;
        if code >= field.order() {
            return Err(bad());
        }
        let c = field.from_code(code);
        Ok(HeckeIdeal::linear(if sign < 0 { c } else { -c }))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn label(&self) -> String {
        let n = self.degree();
        if n == 1 {
            let c = self.coeffs[0];
            return if c.is_zero() { "T".into() } else { format!("T-{}", (-c).code()) };
        }
        let mut s = format!("T^{n}");
        for (i, c) in self.coeffs.iter().enumerate().take(n).rev() {
            if c.is_zero() {
                continue;
            }
            match i {
                0 => s.push_str(&format!("+{}", c.code())),
                1 => s.push_str(&format!("+{}T", c.code())),
                _ => s.push_str(&format!("+{}T^{i}", c.code())),
            }
        }
        s
    }
}

/// The Hecke operator of `c-Ind σ`, built from its value on `φ` and extended
/// linearly and `G`-equivariantly through a spanning set of `σ`.
#[derive(Debug, Clone)]
pub struct Hecke {
    weight: Weight,
    v0: Vec<FieldElem>,
    phi_image: CindElement,
    /// `T[1, e_i]` for the standard basis of `σ`.
    basis_images: Vec<CindElement>,
}

/// Spanning sets of `σ` of the form `k_j · v₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanningSet {
    /// `lower(j)`, `j = 0..=r`.
    Lower,
    /// `s · lower(j)`, `j = 0..=r`.
    SwappedLower,
}

impl SpanningSet {
    pub fn elements(&self, weight: &Weight) -> Vec<Mat2> {
        let p = weight.p();
        (0..=weight.r() as i128)
            .map(|j| {
                let low = Mat2::lower(PadicRational::from_int(p, j));
                match self {
                    SpanningSet::Lower => low,
                    SpanningSet::SwappedLower => Mat2::s(p) * low,
                }
            })
            .collect()
    }
}

impl Hecke {
    pub fn new(weight: Weight) -> Result<Hecke> {
        Hecke::with_spanning_set(weight, SpanningSet::Lower)
    }

    pub fn with_spanning_set(weight: Weight, set: SpanningSet) -> Result<Hecke> {
        let (v0, _) = i1_fixed_line(&weight)?;
        let phi_image = Hecke::formula(&weight, &v0);
        let basis_images = Hecke::extend(&weight, &v0, &phi_image, set)?;
        Ok(Hecke { weight, v0, phi_image, basis_images })
    }

    /// `Tφ = Σ_λ [u(ℓ_λ) t, v₀]`, plus `ψ(-1)·[Π, v₀]` when `σ = ψ ∘ det`.
    ///
    /// The sign `ψ(-1) = (-1)^m` is what makes `v ↦ T[1, v]` commute with `K`:
    /// `s·Π = t` while `s·u(ℓ)t` lands on `u(1/ℓ)t` up to an element of `ZK`
    /// of determinant `-1`.
    pub fn formula(weight: &Weight, v0: &[FieldElem]) -> CindElement {
        let p = weight.p();
        let phi = CindElement::basis(*weight, TreeVertex::base(p), v0.to_vec());
        let mut out = hecke_sum(&phi);
        if weight.is_character() {
            let sign = weight.field().from_int(-1).pow(weight.m() as u64);
            out = out.add_scaled(&phi.act(&Mat2::pi(p)), sign);
        }
        out
    }

    fn extend(
        weight: &Weight,
        v0: &[FieldElem],
        phi_image: &CindElement,
        set: SpanningSet,
    ) -> Result<Vec<CindElement>> {
        let f = weight.field();
        let n = weight.dim();
        let ks = set.elements(weight);
        // columns σ(k_j) v₀
        let cols: Vec<Vec<FieldElem>> = ks.iter().map(|k| weight.act(k, v0)).collect::<Result<_>>()?;
        let matrix: Matrix = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let translates: Vec<CindElement> = ks.iter().map(|k| phi_image.act(k)).collect();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut rhs = vec![f.zero(); n];
            rhs[i] = f.one();
            let a = match solve_linear(f, &matrix, n, &rhs)? {
                LinearSolution::Solvable { solution, .. } => solution,
                LinearSolution::Inconsistent { .. } => return Err(Error::SpanningSetInsufficient),
            };
            let img = translates.iter().zip(&a).fold(CindElement::zero(*weight), |acc, (t, c)| acc.add_scaled(t, *c));
            out.push(img);
        }
        Ok(out)
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn v0(&self) -> &[FieldElem] {
        &self.v0
    }

    /// `Tφ` as given by [`Hecke::formula`].
    pub fn phi_image(&self) -> &CindElement {
        &self.phi_image
    }

    /// `T[1, v]`.
    pub fn at_base(&self, v: &[FieldElem]) -> CindElement {
        self.basis_images.iter().zip(v).fold(CindElement::zero(self.weight), |acc, (img, c)| acc.add_scaled(img, *c))
    }

    pub fn apply(&self, f: &CindElement) -> CindElement {
        let mut out = CindElement::zero(self.weight);
        for (vertex, c) in f.support() {
            out = out.add(&self.at_base(c).act(&vertex.matrix()));
        }
        out
    }

    pub fn apply_poly(&self, ideal: &HeckeIdeal, f: &CindElement) -> CindElement {
        // Horner: P(T)f = ((a_n T + a_{n-1}) T + …) f
        let coeffs = ideal.coeffs();
        let mut acc = f.scale(coeffs[coeffs.len() - 1]);
        for c in coeffs.iter().rev().skip(1) {
            acc = self.apply(&acc).add_scaled(f, *c);
        }
        acc
    }

    /// Checks `T[1, σ(k)v] = k·T[1, v]` for the given `k ∈ K` on all basis vectors.
    pub fn is_equivariant_under(&self, k: &Mat2) -> bool {
        let f = self.weight.field();
        (0..self.weight.dim()).all(|i| {
            let mut e = vec![f.zero(); self.weight.dim()];
            e[i] = f.one();
            let lhs = self.at_base(&self.weight.act(k, &e).expect("k in K"));
            let rhs = self.at_base(&e).act(k);
            lhs == rhs
        })
    }

    /// Largest outward step of `T`: `radius(Tf) ≤ radius(f) + 1`.
    pub fn radius_bound(f: &CindElement) -> i64 {
        f.radius() + 1
    }
}

/// `hecke_T(f)` with the default spanning set.
pub fn hecke_t(f: &CindElement) -> Result<CindElement> {
    Ok(Hecke::new(f.weight())?.apply(f))
}

/// Distance of the vertex `g·base` from the base vertex.
pub fn translate_distance(g: &Mat2) -> i64 {
    tree_distance(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;

    #[test]
    fn identity_and_centre_act_trivially() {
        let f = Field::prime(3).unwrap();
        let w = Weight::new(f, 1, 0).unwrap();
        let phi = CindElement::phi(w).unwrap();
        assert_eq!(phi.act(&Mat2::identity(3)), phi);
        assert_eq!(phi.act(&Mat2::scalar(PadicRational::from_int(3, 3))), phi);
        let k = Mat2::lower(PadicRational::from_int(3, 1));
        let moved = phi.act(&k);
        assert_eq!(moved.support().keys().copied().collect::<Vec<_>>(), vec![TreeVertex::base(3)]);
        assert_eq!(moved.support()[&TreeVertex::base(3)], w.act(&k, &phi.support()[&TreeVertex::base(3)]).unwrap());
    }

    #[test]
    fn lemma_formula_cases() {
        let f = Field::prime(3).unwrap();
        let triv = Weight::new(f, 0, 0).unwrap();
        let h = Hecke::new(triv).unwrap();
        let phi = CindElement::phi(triv).unwrap();
        let expected = hecke_sum(&phi).add(&phi.act(&Mat2::pi(3)));
        assert_eq!(h.apply(&phi), expected);

        let std = Weight::new(f, 1, 0).unwrap();
        let h = Hecke::new(std).unwrap();
        let phi = CindElement::phi(std).unwrap();
        let tphi = h.apply(&phi);
        assert_eq!(tphi, hecke_sum(&phi));
        assert_eq!(tphi.radius(), 1);
        assert!(!tphi.support().contains_key(&TreeVertex::base(3)));
    }

    #[test]
    fn ideal_parsing() {
        let f = Field::prime(5).unwrap();
        assert_eq!(HeckeIdeal::parse(f, "T").unwrap().label(), "T");
        assert_eq!(HeckeIdeal::parse(f, "T^2").unwrap().label(), "T^2");
        assert_eq!(HeckeIdeal::parse(f, "T-2").unwrap().label(), "T-2");
        assert_eq!(HeckeIdeal::parse(f, "T - 2").unwrap().coeffs()[0], f.from_int(-2));
        assert!(HeckeIdeal::parse(f, "S").is_err());
        assert!(HeckeIdeal::parse(f, "T^0").is_err());
    }
}
