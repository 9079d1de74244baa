//! Truncated quotient models `C_R / (P(T)·C_{R - deg P})`.
//!
//! `C_R` is the span of `[v, e_i]` over vertices at distance at most `R`.
//! Since `T` is injective and pushes the radius out by exactly one,
//! `P(T)·c-Ind ∩ C_R = P(T)·C_{R - deg P}`, so the truncated quotient embeds
//! in `c-Ind / (P(T))` and equality there is decided exactly. Coordinates are
//! ordered outer vertices first; pivots are leftmost, so reduction never
//! increases the radius.

use std::cmp::Reverse;
use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::exactfield::{column_kernel, Echelon, SparseVec};
use crate::fqweights::Weight;
use crate::padicmat::{i1_generators, Mat2, TreeVertex};

use super::{CindElement, Hecke, HeckeIdeal};

/// Default largest truncation radius.
pub const DEFAULT_R_MAX: i64 = 4;

/// Coordinates on `C_R`.
#[derive(Debug, Clone)]
pub struct Ball {
    weight: Weight,
    radius: i64,
    vertices: Vec<TreeVertex>,
    index: HashMap<TreeVertex, usize>,
}

impl Ball {
    pub fn new(weight: Weight, radius: i64) -> Ball {
        let p = weight.p();
        let mut seen = HashMap::new();
        let mut vertices = Vec::new();
        let mut queue = VecDeque::new();
        if radius >= 0 {
            let base = TreeVertex::base(p);
            seen.insert(base, ());
            queue.push_back(base);
        }
        while let Some(v) = queue.pop_front() {
            vertices.push(v);
            if v.distance() == radius {
                continue;
            }
            for n in v.neighbours() {
                if n.distance() <= radius && seen.insert(n, ()).is_none() {
                    queue.push_back(n);
                }
            }
        }
        vertices.sort_by_key(|v| (Reverse(v.distance()), *v));
        let index = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        Ball { weight, radius, vertices, index }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() * self.weight.dim()
    }

    /// Vertex and basis slot of a coordinate.
    pub fn slot(&self, coord: usize) -> (TreeVertex, usize) {
        let n = self.weight.dim();
        (self.vertices[coord / n], coord % n)
    }

    pub fn coords(&self, f: &CindElement) -> Result<SparseVec> {
        let n = self.weight.dim();
        let mut pairs = Vec::new();
        for (v, c) in f.support() {
            let i = *self.index.get(v).ok_or(Error::TruncationTooSmall { needed: f.radius(), max: self.radius })?;
            pairs.extend(c.iter().enumerate().map(|(j, x)| (i * n + j, *x)));
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    pub fn element(&self, v: &SparseVec) -> CindElement {
        let f = self.weight.field();
        let mut out = CindElement::zero(self.weight);
        for &(coord, x) in v.entries() {
            let (vertex, slot) = self.slot(coord);
            let mut e = vec![f.zero(); self.weight.dim()];
            e[slot] = x;
            out = out.add(&CindElement::basis(self.weight, vertex, e));
        }
        out
    }

    pub fn basis_element(&self, coord: usize) -> CindElement {
        self.element(&SparseVec::unit(coord, self.weight.field()))
    }
}

/// Outcome of a membership query in `P(T)·c-Ind`.
#[derive(Debug, Clone)]
pub enum Membership {
    /// `f = P(T) h`.
    Zero { preimage: CindElement },
    /// `f ∉ P(T)·c-Ind`; the certificate is the normal form of `f` at the
    /// listed radii.
    Nonzero { certificate: SparseVec, certified_radii: Vec<i64> },
}

impl Membership {
    pub fn is_zero(&self) -> bool {
        matches!(self, Membership::Zero { .. })
    }
}

/// `C_R / (P(T)·C_{R - deg})`, or `C_R` itself without an ideal.
#[derive(Debug, Clone)]
pub struct QuotientModel {
    hecke: Hecke,
    ideal: Option<HeckeIdeal>,
    ball: Ball,
    image: Echelon,
    /// Ball coordinate of the preimage basis vector behind each inserted generator.
    generators: Vec<usize>,
}

impl QuotientModel {
    pub fn new(weight: Weight, ideal: Option<HeckeIdeal>, radius: i64, r_max: i64) -> Result<QuotientModel> {
        QuotientModel::with_hecke(Hecke::new(weight)?, ideal, radius, r_max)
    }

    pub fn with_hecke(hecke: Hecke, ideal: Option<HeckeIdeal>, radius: i64, r_max: i64) -> Result<QuotientModel> {
        if radius > r_max {
            return Err(Error::TruncationTooSmall { needed: radius, max: r_max });
        }
        let weight = hecke.weight();
        let ball = Ball::new(weight, radius);
        let mut image = Echelon::tracking(weight.field());
        let mut generators = Vec::new();
        if let Some(ideal) = &ideal {
            let inner = radius - ideal.degree() as i64;
            for coord in 0..ball.dim() {
                let (vertex, _) = ball.slot(coord);
                if vertex.distance() > inner {
                    continue;
                }
                let img = hecke.apply_poly(ideal, &ball.basis_element(coord));
                let v = ball
                    .coords(&img)
                    .map_err(|_| Error::ModelInconsistency("P(T) image left the expected ball".into()))?;
                image.insert(&v);
                generators.push(coord);
            }
        }
        Ok(QuotientModel { hecke, ideal, ball, image, generators })
    }

    pub fn weight(&self) -> Weight {
        self.hecke.weight()
    }

    pub fn hecke(&self) -> &Hecke {
        &self.hecke
    }

    pub fn ideal(&self) -> Option<&HeckeIdeal> {
        self.ideal.as_ref()
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn radius(&self) -> i64 {
        self.ball.radius
    }

    pub fn quotient_dim(&self) -> usize {
        self.ball.dim() - self.image.dim()
    }

    pub fn image_dim(&self) -> usize {
        self.image.dim()
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.image.reduce(v)
    }

    pub fn normal_form(&self, f: &CindElement) -> Result<SparseVec> {
        Ok(self.reduce(&self.ball.coords(f)?))
    }

    pub fn lift(&self, v: &SparseVec) -> CindElement {
        self.ball.element(v)
    }

    /// `g·v` on normal forms.
    pub fn act(&self, g: &Mat2, v: &SparseVec) -> Result<SparseVec> {
        self.normal_form(&self.lift(v).act(g))
    }

    pub fn is_zero(&self, f: &CindElement) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Decides `f ∈ P(T)·c-Ind` at this radius.
    pub fn membership(&self, f: &CindElement) -> Result<Membership> {
        let coords = self.ball.coords(f)?;
        let red = self.image.reduce_tracked(&coords);
        if red.remainder.is_zero() {
            let field = self.weight().field();
            let mut pre = SparseVec::new();
            for &(g, c) in red.combination.entries() {
                pre = pre.add_scaled(&SparseVec::unit(self.generators[g], field), c);
            }
            Ok(Membership::Zero { preimage: self.ball.element(&pre) })
        } else {
            Ok(Membership::Nonzero { certificate: red.remainder, certified_radii: vec![self.radius()] })
        }
    }

    /// Basis (normal forms) of the `I_1`-fixed vectors of the model.
    pub fn i1_fixed_basis(&self) -> Result<Vec<SparseVec>> {
        let field = self.weight().field();
        let free: Vec<usize> = (0..self.ball.dim()).filter(|c| !self.image.is_pivot(*c)).collect();
        let gens = i1_generators(self.weight().p());
        let dim = self.ball.dim();
        let mut columns = Vec::with_capacity(free.len());
        for &c in &free {
            let e = SparseVec::unit(c, field);
            let mut col = SparseVec::new();
            for (gi, g) in gens.iter().enumerate() {
                let moved = self.act(g, &e)?.add_scaled(&e, -field.one());
                let shifted = SparseVec::from_pairs(moved.entries().iter().map(|&(i, x)| (gi * dim + i, x)));
                col = col.add(&shifted);
            }
            columns.push(col);
        }
        Ok(column_kernel(field, &columns)
            .into_iter()
            .map(|k| SparseVec::from_pairs(k.entries().iter().map(|&(j, x)| (free[j], x))))
            .collect())
    }
}

/// `quotient_membership(f, ideal, R)`: decides `f ∈ P(T)·c-Ind` with a preimage
/// search at radius `R`, re-checking a nonzero verdict at `R + 1` when that is
/// within `r_max`.
pub fn quotient_membership(f: &CindElement, ideal: &HeckeIdeal, radius: i64, r_max: i64) -> Result<Membership> {
    if radius < f.radius() {
        return Err(Error::InvalidConfig(format!("radius {radius} below the element radius {}", f.radius())));
    }
    let model = QuotientModel::new(f.weight(), Some(ideal.clone()), radius, r_max)?;
    match model.membership(f)? {
        Membership::Nonzero { certificate, mut certified_radii } => {
            if radius < r_max {
                let wider = QuotientModel::with_hecke(model.hecke.clone(), Some(ideal.clone()), radius + 1, r_max)?;
                if wider.membership(f)?.is_zero() {
                    return Err(Error::ModelInconsistency("membership verdict changed with the radius".into()));
                }
                certified_radii.push(radius + 1);
            }
            Ok(Membership::Nonzero { certificate, certified_radii })
        }
        zero => Ok(zero),
    }
}

/// `i1_fixed_ball(σ, R, ideal)`: `I_1`-fixed vectors of radius at most `R`
/// (in the quotient when an ideal is given), lifted to elements.
pub fn i1_fixed_ball(weight: Weight, radius: i64, ideal: Option<&HeckeIdeal>, r_max: i64) -> Result<Vec<CindElement>> {
    let model = QuotientModel::new(weight, ideal.cloned(), radius, r_max)?;
    Ok(model.i1_fixed_basis()?.iter().map(|v| model.lift(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;

    #[test]
    fn ball_sizes() {
        let f = Field::prime(3).unwrap();
        let w = Weight::new(f, 1, 0).unwrap();
        assert_eq!(Ball::new(w, 0).vertices().len(), 1);
        assert_eq!(Ball::new(w, 1).vertices().len(), 5);
        assert_eq!(Ball::new(w, 2).vertices().len(), 17);
        let b = Ball::new(w, 2);
        assert_eq!(b.vertices().last(), Some(&TreeVertex::base(3)));
    }

    #[test]
    fn membership_examples() {
        let f = Field::prime(3).unwrap();
        let w = Weight::new(f, 1, 0).unwrap();
        let phi = CindElement::phi(w).unwrap();
        let h = Hecke::new(w).unwrap();
        let t = HeckeIdeal::power(f, 1).unwrap();
        match quotient_membership(&h.apply(&phi), &t, 1, DEFAULT_R_MAX).unwrap() {
            Membership::Zero { preimage } => assert_eq!(preimage, phi),
            other => panic!("{other:?}"),
        }
        match quotient_membership(&phi, &t, 1, DEFAULT_R_MAX).unwrap() {
            Membership::Nonzero { certified_radii, .. } => assert_eq!(certified_radii, vec![1, 2]),
            other => panic!("{other:?}"),
        }
        let t2 = HeckeIdeal::power(f, 2).unwrap();
        let tt = h.apply(&h.apply(&phi));
        assert!(quotient_membership(&tt, &t2, 2, DEFAULT_R_MAX).unwrap().is_zero());
        assert!(matches!(
            quotient_membership(&phi, &t, 5, DEFAULT_R_MAX),
            Err(Error::TruncationTooSmall { needed: 5, max: 4 })
        ));
    }

    #[test]
    fn fixed_ball_examples() {
        let f = Field::prime(3).unwrap();
        let w = Weight::new(f, 1, 0).unwrap();
        let phi = CindElement::phi(w).unwrap();
        let basis = i1_fixed_ball(w, 0, None, DEFAULT_R_MAX).unwrap();
        assert_eq!(basis, vec![phi.clone()]);
        let model = QuotientModel::new(w, None, 1, DEFAULT_R_MAX).unwrap();
        let fixed = model.i1_fixed_basis().unwrap();
        let mut span = Echelon::new(f);
        for v in &fixed {
            span.insert(v);
        }
        assert!(span.contains(&model.normal_form(&phi).unwrap()));
        assert!(span.contains(&model.normal_form(&super::super::hecke_sum(&phi)).unwrap()));
        let t = HeckeIdeal::power(f, 1).unwrap();
        let q = QuotientModel::new(w, Some(t), 1, DEFAULT_R_MAX).unwrap();
        assert!(q.is_zero(&super::super::hecke_sum(&phi)).unwrap());
    }
}
