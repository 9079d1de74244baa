//! The common interface the drivers run against, its two concrete models, and
//! generic linear-algebra helpers over it.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::compactind::{CindElement, HeckeIdeal, QuotientModel};
use crate::error::{Error, Result};
use crate::exactfield::{column_kernel, Echelon, Field, FieldElem, SparseVec};
use crate::fqweights::{gl2_generators, is_irreducible, FiniteKModule, Irreducibility, TorusCharacter, Weight};
use crate::padicmat::{i1_generators, k1_generators, k_generators, unit_lift, Mat2, PadicRational};
use crate::principalseries::{point_count, point_rep, PSFunction};

/// A smooth representation of `G`, seen through finitely many exact vectors.
pub trait RepHandle {
    type Vector: Clone + PartialEq + fmt::Debug;

    fn field(&self) -> Field;
    fn describe(&self) -> String;
    /// Truncation parameters (radius or level) that certify the model.
    fn truncation(&self) -> Value;
    fn zero(&self) -> Self::Vector;
    fn act(&self, g: &Mat2, v: &Self::Vector) -> Result<Self::Vector>;
    fn add_scaled(&self, a: &Self::Vector, b: &Self::Vector, c: FieldElem) -> Self::Vector;
    fn is_zero(&self, v: &Self::Vector) -> bool;
    /// Injective linear coordinates in a fixed ambient basis.
    fn coordinates(&self, v: &Self::Vector) -> SparseVec;
    fn vector_json(&self, v: &Self::Vector) -> Value;

    fn p(&self) -> u32 {
        self.field().p()
    }

    fn sub(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector {
        self.add_scaled(a, b, -self.field().one())
    }

    fn scale(&self, v: &Self::Vector, c: FieldElem) -> Self::Vector {
        self.add_scaled(&self.zero(), v, c)
    }
}

/// `c-Ind σ / (P(T))` truncated at a radius, vectors in normal form.
#[derive(Debug, Clone)]
pub struct CindQuotientRep {
    model: QuotientModel,
}

impl CindQuotientRep {
    pub fn new(weight: Weight, ideal: Option<HeckeIdeal>, radius: i64) -> Result<CindQuotientRep> {
        Ok(CindQuotientRep { model: QuotientModel::new(weight, ideal, radius, radius)? })
    }

    pub fn model(&self) -> &QuotientModel {
        &self.model
    }

    pub fn weight(&self) -> Weight {
        self.model.weight()
    }

    pub fn from_element(&self, f: &CindElement) -> Result<SparseVec> {
        self.model.normal_form(f)
    }

    /// The class of `φ = [1, v₀]`.
    pub fn phi(&self) -> Result<SparseVec> {
        self.from_element(&CindElement::phi(self.weight())?)
    }

    /// A uniformly random nonzero class supported in the radius-`r` ball.
    pub fn random_vector<G: Rng>(&self, rng: &mut G, radius: i64) -> SparseVec {
        let f = self.field();
        let ball = self.model.ball();
        let coords: Vec<usize> = (0..ball.dim()).filter(|&c| ball.slot(c).0.distance() <= radius).collect();
        loop {
            let raw = SparseVec::from_pairs(coords.iter().map(|&c| (c, f.from_code(rng.gen_range(0..f.order())))));
            let v = self.model.reduce(&raw);
            if !v.is_zero() {
                return v;
            }
        }
    }
}

impl RepHandle for CindQuotientRep {
    type Vector = SparseVec;

    fn field(&self) -> Field {
        self.weight().field()
    }

    fn describe(&self) -> String {
        match self.model.ideal() {
            Some(ideal) => format!("c-Ind({})/({}) at p={}", self.weight().label(), ideal.label(), self.p()),
            None => format!("c-Ind({}) at p={}", self.weight().label(), self.p()),
        }
    }

    fn truncation(&self) -> Value {
        json!({ "radius": self.model.radius() })
    }

    fn zero(&self) -> SparseVec {
        SparseVec::new()
    }

    fn act(&self, g: &Mat2, v: &SparseVec) -> Result<SparseVec> {
        self.model.act(g, v)
    }

    fn add_scaled(&self, a: &SparseVec, b: &SparseVec, c: FieldElem) -> SparseVec {
        a.add_scaled(b, c)
    }

    fn is_zero(&self, v: &SparseVec) -> bool {
        v.is_zero()
    }

    fn coordinates(&self, v: &SparseVec) -> SparseVec {
        v.clone()
    }

    fn vector_json(&self, v: &SparseVec) -> Value {
        self.model.lift(v).to_json()
    }
}

/// `Ind_P^G χ` with functions tabulated up to level `n_max`.
#[derive(Debug, Clone)]
pub struct PrincipalSeriesRep {
    chi: TorusCharacter,
    n_max: u32,
}

impl PrincipalSeriesRep {
    pub fn new(chi: TorusCharacter, n_max: u32) -> PrincipalSeriesRep {
        PrincipalSeriesRep { chi, n_max }
    }

    pub fn chi(&self) -> TorusCharacter {
        self.chi
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Rewrites `f` at the smallest level where it is still tabulated exactly.
    pub fn coarsen(&self, f: &PSFunction) -> PSFunction {
        let p = self.p();
        let mut f = f.clone();
        while f.level() > 1 {
            let level = f.level() - 1;
            let values = (0..point_count(p, level)).map(|j| f.evaluate(&point_rep(p, level, j))).collect();
            let coarse = PSFunction::from_values(self.chi, level, values).expect("sizes match");
            if coarse != f {
                break;
            }
            f = coarse;
        }
        f
    }

    pub fn random_vector<G: Rng>(&self, rng: &mut G, level: u32) -> PSFunction {
        let f = self.field();
        loop {
            let values = (0..point_count(self.p(), level)).map(|_| f.from_code(rng.gen_range(0..f.order()))).collect();
            let v = PSFunction::from_values(self.chi, level, values).expect("sizes match");
            if !v.is_zero() {
                return self.coarsen(&v);
            }
        }
    }
}

impl RepHandle for PrincipalSeriesRep {
    type Vector = PSFunction;

    fn field(&self) -> Field {
        self.chi.field()
    }

    fn describe(&self) -> String {
        format!("Ind_P^G{} at p={}", self.chi.label(), self.p())
    }

    fn truncation(&self) -> Value {
        json!({ "n_max": self.n_max })
    }

    fn zero(&self) -> PSFunction {
        PSFunction::zero(self.chi, 1)
    }

    fn act(&self, g: &Mat2, v: &PSFunction) -> Result<PSFunction> {
        Ok(self.coarsen(&v.act(g, self.n_max)?))
    }

    fn add_scaled(&self, a: &PSFunction, b: &PSFunction, c: FieldElem) -> PSFunction {
        self.coarsen(&a.add_scaled(b, c))
    }

    fn is_zero(&self, v: &PSFunction) -> bool {
        v.is_zero()
    }

    fn coordinates(&self, v: &PSFunction) -> SparseVec {
        SparseVec::from_dense(v.refine(self.n_max).values())
    }

    fn vector_json(&self, v: &PSFunction) -> Value {
        v.to_json()
    }
}

/// `Σ_i c_i v_i`.
pub fn combine<R: RepHandle>(rep: &R, terms: impl IntoIterator<Item = (FieldElem, R::Vector)>) -> R::Vector {
    terms.into_iter().fold(rep.zero(), |acc, (c, v)| rep.add_scaled(&acc, &v, c))
}

/// `u(ℓ_λ) t` for `λ = 0, …, p-1`.
pub fn ut_translates(p: u32) -> Vec<Mat2> {
    (0..p).map(|l| Mat2::upper(unit_lift(p, l)) * Mat2::t(p)).collect()
}

/// `w_j = Σ_λ λ^j · u(ℓ_λ) t · v`, with `0^0 = 1`.
pub fn twisted_sum<R: RepHandle>(rep: &R, v: &R::Vector, j: u32) -> Result<R::Vector> {
    let f = rep.field();
    let mut acc = rep.zero();
    for (l, g) in ut_translates(rep.p()).iter().enumerate() {
        let c = f.from_int(l as i64).pow(j as u64);
        if c.is_zero() {
            continue;
        }
        acc = rep.add_scaled(&acc, &rep.act(g, v)?, c);
    }
    Ok(acc)
}

/// `Σ_λ u(ℓ_λ) t · v`.
pub fn hecke_sum<R: RepHandle>(rep: &R, v: &R::Vector) -> Result<R::Vector> {
    twisted_sum(rep, v, 0)
}

/// `g·v - v` for each `g`.
pub fn residuals<R: RepHandle>(rep: &R, v: &R::Vector, gens: &[Mat2]) -> Result<Vec<R::Vector>> {
    gens.iter().map(|g| Ok(rep.sub(&rep.act(g, v)?, v))).collect()
}

pub fn is_i1_fixed<R: RepHandle>(rep: &R, v: &R::Vector) -> Result<bool> {
    Ok(residuals(rep, v, &i1_generators(rep.p()))?.iter().all(|r| rep.is_zero(r)))
}

/// Exponents `(e₁, e₂)` with `diag(a, d)·v = ā^{e₁} d̄^{e₂} v` for an
/// `I_1`-fixed `v`, or `None` when `I` does not act on `v` by a character.
pub fn iwahori_character<R: RepHandle>(rep: &R, v: &R::Vector) -> Result<Option<(u32, u32)>> {
    let p = rep.p();
    let f = rep.field();
    let g = crate::exactfield::primitive_root(p);
    let q = |x: u32| PadicRational::from_int(p, x as i128);
    let gf = f.from_int(g as i64);
    let one = PadicRational::one(p);
    let mut exps = [0u32; 2];
    for (slot, h) in [Mat2::diag(q(g), one), Mat2::diag(one, q(g))].iter().enumerate() {
        let moved = rep.act(h, v)?;
        match (0..p - 1).find(|&e| moved == rep.scale(v, gf.pow(e as u64))) {
            Some(e) => exps[slot] = e,
            None => return Ok(None),
        }
    }
    Ok(Some((exps[0], exps[1])))
}

/// The span of `G'`-translates of one seed, where `G'` is generated by `gens`;
/// every basis vector is a single translate `word·seed`.
#[derive(Debug, Clone)]
pub struct TranslateSpan<V> {
    pub basis: Vec<V>,
    pub words: Vec<Mat2>,
    echelon: Echelon,
}

impl<V: Clone> TranslateSpan<V> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coefficients of `v` in the translate basis, if `v` lies in the span.
    pub fn express<R: RepHandle<Vector = V>>(&self, rep: &R, v: &V) -> Option<SparseVec> {
        let red = self.echelon.reduce_tracked(&rep.coordinates(v));
        red.remainder.is_zero().then_some(red.combination)
    }
}

/// Closure of `seed` under `gens`; fails once the span exceeds `limit`.
pub fn translate_span<R: RepHandle>(
    rep: &R,
    seed: &R::Vector,
    gens: &[Mat2],
    limit: usize,
) -> Result<TranslateSpan<R::Vector>> {
    let p = rep.p();
    let mut span = TranslateSpan { basis: Vec::new(), words: Vec::new(), echelon: Echelon::tracking(rep.field()) };
    if rep.is_zero(seed) {
        return Ok(span);
    }
    span.echelon.insert(&rep.coordinates(seed));
    span.basis.push(seed.clone());
    span.words.push(Mat2::identity(p));
    let mut next = 0;
    while next < span.basis.len() {
        let (v, word) = (span.basis[next].clone(), span.words[next]);
        next += 1;
        for g in gens {
            let w = rep.act(g, &v)?;
            let coords = rep.coordinates(&w);
            if span.echelon.contains(&coords) {
                continue;
            }
            if span.basis.len() == limit {
                return Err(Error::ModelInconsistency(format!("translate span exceeds {limit} dimensions")));
            }
            span.echelon.insert(&coords);
            span.basis.push(w);
            span.words.push(*g * word);
        }
    }
    Ok(span)
}

/// Vectors of `span` fixed by every element of `gens`, as coefficient
/// vectors in the translate basis.
pub fn fixed_in_span<R: RepHandle>(rep: &R, span: &TranslateSpan<R::Vector>, gens: &[Mat2]) -> Result<Vec<SparseVec>> {
    let f = rep.field();
    let n = span.dim();
    let mut columns = Vec::with_capacity(n);
    for (i, b) in span.basis.iter().enumerate() {
        let mut col = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            let moved = rep.act(g, b)?;
            let coeffs = span
                .express(rep, &moved)
                .ok_or_else(|| Error::ModelInconsistency(format!("span is not stable under {g:?}")))?;
            let diff = coeffs.add_scaled(&SparseVec::unit(i, f), -f.one());
            col.extend(diff.entries().iter().map(|&(r, x)| (gi * n + r, x)));
        }
        columns.push(SparseVec::from_pairs(col));
    }
    Ok(column_kernel(f, &columns))
}

/// Verdict on `⟨K·v⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KSpanVerdict {
    Irreducible,
    Reducible(String),
    Inconclusive,
}

/// `⟨K·v⟩` together with its irreducibility verdict.
#[derive(Debug, Clone)]
pub struct KSpan {
    pub dim: usize,
    pub k1_trivial: bool,
    pub module: Option<FiniteKModule>,
    pub verdict: KSpanVerdict,
}

impl KSpan {
    /// `(r, m)` of the weight `Sym^r det^m` when the span is irreducible: the
    /// dimension gives `r`, the torus eigenvalue on the `U`-fixed line gives `m`.
    pub fn weight(&self) -> Option<(u32, u32)> {
        if self.verdict != KSpanVerdict::Irreducible {
            return None;
        }
        let module = self.module.as_ref()?;
        let f = module.field();
        let g = f.from_int(crate::exactfield::primitive_root(f.p()) as i64);
        let spaces = module.torus_eigenspaces();
        let [((_, c2), _)] = spaces.as_slice() else {
            return None;
        };
        let m = (0..f.p() - 1).find(|&e| g.pow(e as u64) == *c2)?;
        Some((self.dim as u32 - 1, m))
    }

    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            KSpanVerdict::Irreducible => "irreducible".to_string(),
            KSpanVerdict::Reducible(why) => format!("reducible: {why}"),
            KSpanVerdict::Inconclusive => "inconclusive".to_string(),
        };
        json!({
            "dim": self.dim,
            "k1_trivial": self.k1_trivial,
            "verdict": verdict,
            "weight": self.weight().map(|(r, m)| format!("Sym^{r} det^{m}")),
        })
    }
}

const K_SPAN_LIMIT: usize = 2048;

/// Computes `⟨K·v⟩`, checks that `K_1` acts trivially on it and decides
/// irreducibility of the resulting `GL_2(F_p)`-module.
pub fn k_span<R: RepHandle>(rep: &R, v: &R::Vector) -> Result<KSpan> {
    let p = rep.p();
    let f = rep.field();
    let span = translate_span(rep, v, &k_generators(p), K_SPAN_LIMIT)?;
    let dim = span.dim();
    for b in &span.basis {
        for r in residuals(rep, b, &k1_generators(p))? {
            if !rep.is_zero(&r) {
                let verdict = KSpanVerdict::Reducible(
                    "K_1 acts nontrivially, so the K_1-invariants form a proper submodule".into(),
                );
                return Ok(KSpan { dim, k1_trivial: false, module: None, verdict });
            }
        }
    }
    let mut gens = Vec::with_capacity(4);
    for g in gl2_generators(p) {
        let mut m = vec![vec![f.zero(); dim]; dim];
        for (i, b) in span.basis.iter().enumerate() {
            let coeffs = span
                .express(rep, &rep.act(&g, b)?)
                .ok_or_else(|| Error::ModelInconsistency("K-span is not K-stable".into()))?;
            for &(r, x) in coeffs.entries() {
                m[r][i] = x;
            }
        }
        gens.push(m);
    }
    let module = FiniteKModule::new(f, dim, gens, format!("K-span in {}", rep.describe()));
    if !module.check_relations() {
        return Err(Error::ModelInconsistency("K-span matrices violate the GL_2(F_p) relations".into()));
    }
    let verdict = match is_irreducible(&module) {
        Irreducibility::Irreducible => KSpanVerdict::Irreducible,
        Irreducibility::Reducible(sub) => {
            KSpanVerdict::Reducible(format!("proper submodule of dimension {}", sub.len()))
        }
        Irreducibility::Inconclusive => KSpanVerdict::Inconclusive,
    };
    Ok(KSpan { dim, k1_trivial: true, module: Some(module), verdict })
}

/// A linear combination `Σ c_i g_i · w` of translates of a fixed vector.
#[derive(Debug, Clone, Default)]
pub struct TranslateCombination {
    terms: Vec<(FieldElem, Mat2)>,
}

impl TranslateCombination {
    pub fn single(c: FieldElem, g: Mat2) -> TranslateCombination {
        TranslateCombination { terms: vec![(c, g)] }
    }

    pub fn terms(&self) -> &[(FieldElem, Mat2)] {
        &self.terms
    }

    pub fn push(&mut self, c: FieldElem, g: Mat2) {
        if c.is_zero() {
            return;
        }
        match self.terms.iter_mut().find(|(_, h)| *h == g) {
            Some((x, _)) => *x += c,
            None => self.terms.push((c, g)),
        }
        self.terms.retain(|(x, _)| !x.is_zero());
    }

    /// `Σ c_i g_i` of `self`, each term multiplied by `c` and left-multiplied by `h`.
    pub fn add_transformed(&mut self, other: &TranslateCombination, c: FieldElem, h: &Mat2) {
        for (x, g) in &other.terms {
            self.push(*x * c, *h * *g);
        }
    }

    pub fn evaluate<R: RepHandle>(&self, rep: &R, w: &R::Vector) -> Result<R::Vector> {
        let mut acc = rep.zero();
        for (c, g) in &self.terms {
            acc = rep.add_scaled(&acc, &rep.act(g, w)?, *c);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(c, g)| json!({ "coeff": c.to_json(), "element": g.to_json() })).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::principalseries::{make_phi1, make_phi2};

    #[test]
    fn coarsening_recovers_level_one() {
        let f = Field::prime(3).unwrap();
        let rep = PrincipalSeriesRep::new(TorusCharacter::trivial(f), 4);
        let phi2 = make_phi2(&rep.chi());
        let fine = phi2.refine(3);
        assert_eq!(rep.coarsen(&fine).level(), 1);
        let moved = rep.act(&Mat2::t(3), &make_phi1(&rep.chi())).unwrap();
        assert!(moved.level() <= 2);
    }

    #[test]
    fn phi_is_fixed_with_the_weight_character() {
        let f = Field::prime(3).unwrap();
        let w = Weight::new(f, 1, 0).unwrap();
        let rep = CindQuotientRep::new(w, Some(HeckeIdeal::parse(f, "T").unwrap()), 2).unwrap();
        let phi = rep.phi().unwrap();
        assert!(is_i1_fixed(&rep, &phi).unwrap());
        assert_eq!(iwahori_character(&rep, &phi).unwrap(), Some((1, 0)));
        let span = k_span(&rep, &phi).unwrap();
        assert_eq!(span.verdict, KSpanVerdict::Irreducible);
        assert_eq!(span.weight(), Some((1, 0)));
    }
}
