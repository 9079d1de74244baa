//! Producing `I_1`-fixed vectors with irreducible `K`-span from an arbitrary
//! nonzero vector, using only `P`-translates.

use serde_json::{json, Value};

use super::rep::{
    fixed_in_span, hecke_sum, is_i1_fixed, iwahori_character, k_span, translate_span, twisted_sum, ut_translates,
    KSpan, KSpanVerdict, RepHandle, TranslateCombination,
};
use crate::error::{Error, Result};
use crate::padicmat::{i1_borel_generators, i1_generators, Mat2, PadicRational};

/// Largest `k` tried when looking for `lower(p^{k+1})` fixing the input.
pub const MAX_SMOOTHNESS_EXPONENT: u32 = 8;
const SPAN_LIMIT: usize = 4096;

/// Which side of the case split `w₀ = 0` / `w₀ ≠ 0` applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NextBranch {
    W0Zero,
    W0Nonzero,
}

impl NextBranch {
    pub fn name(&self) -> &'static str {
        match self {
            NextBranch::W0Zero => "w0 = 0",
            NextBranch::W0Nonzero => "w0 != 0",
        }
    }
}

#[derive(Debug, Clone)]
pub struct NextOutcome<V> {
    pub j: u32,
    pub w: V,
    pub branch: NextBranch,
    pub character: (u32, u32),
    pub k_span: KSpan,
    /// For every `j` tried: whether `w_j` vanished, was `I_1`-fixed, and the verdict.
    pub tried: Vec<Value>,
}

impl<V> NextOutcome<V> {
    pub fn to_json(&self) -> Value {
        json!({
            "j": self.j,
            "branch": self.branch.name(),
            "input_character": [self.character.0, self.character.1],
            "k_span": self.k_span.to_json(),
            "tried": self.tried,
        })
    }
}

/// For `I_1`-fixed `v` on which `I` acts by a character, returns the first
/// `j ∈ {0, …, p-1}` such that `w_j = Σ_λ λ^j u(ℓ_λ) t v` is nonzero,
/// `I_1`-fixed and has irreducible `K`-span.
pub fn lemma_next<R: RepHandle>(rep: &R, v: &R::Vector) -> Result<NextOutcome<R::Vector>> {
    if rep.is_zero(v) {
        return Err(Error::HypothesisViolated("lemma_next needs a nonzero vector".into()));
    }
    if !is_i1_fixed(rep, v)? {
        return Err(Error::HypothesisViolated("input is not I_1-fixed".into()));
    }
    let character = iwahori_character(rep, v)?
        .ok_or_else(|| Error::HypothesisViolated("I does not act on the input by a character".into()))?;
    let branch = if rep.is_zero(&hecke_sum(rep, v)?) { NextBranch::W0Zero } else { NextBranch::W0Nonzero };
    let mut tried = Vec::new();
    for j in 0..rep.p() {
        let w = twisted_sum(rep, v, j)?;
        if rep.is_zero(&w) {
            tried.push(json!({ "j": j, "zero": true }));
            continue;
        }
        if !is_i1_fixed(rep, &w)? {
            tried.push(json!({ "j": j, "zero": false, "i1_fixed": false }));
            continue;
        }
        let span = k_span(rep, &w)?;
        tried.push(json!({ "j": j, "zero": false, "i1_fixed": true, "k_span": span.to_json() }));
        match span.verdict {
            KSpanVerdict::Irreducible => return Ok(NextOutcome { j, w, branch, character, k_span: span, tried }),
            KSpanVerdict::Inconclusive => return Err(Error::Inconclusive),
            KSpanVerdict::Reducible(_) => {}
        }
    }
    Err(Error::LemmaNextFailure)
}

#[derive(Debug, Clone)]
pub struct GiveOutcome<V> {
    pub v: V,
    pub k: u32,
    /// Dimension of `⟨(I_1 ∩ P)·t^k w⟩`.
    pub tau_dim: usize,
    /// Dimension of its `I_1`-fixed subspace.
    pub fixed_dim: usize,
    /// Torus character `(i₁, i₂)` used for the averaging step.
    pub averaging_character: (u32, u32),
    /// `None` when `w` itself already qualified.
    pub next: Option<NextOutcome<V>>,
    /// `v = Σ c_i g_i · w` with every `g_i ∈ P`.
    pub certificate: TranslateCombination,
}

/// Independent re-check of a [`GiveOutcome`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GiveVerification {
    pub nonzero: bool,
    pub i1_fixed: bool,
    pub irreducible: bool,
    pub certificate_in_p: bool,
    pub certificate_reproduces: bool,
}

impl GiveVerification {
    pub fn passed(&self) -> bool {
        self.nonzero && self.i1_fixed && self.irreducible && self.certificate_in_p && self.certificate_reproduces
    }

    pub fn to_json(&self) -> Value {
        json!({
            "nonzero": self.nonzero,
            "i1_fixed": self.i1_fixed,
            "irreducible": self.irreducible,
            "certificate_in_P": self.certificate_in_p,
            "certificate_reproduces": self.certificate_reproduces,
        })
    }
}

impl<V: Clone + PartialEq> GiveOutcome<V> {
    /// Recomputes every postcondition from `w` and the certificate alone.
    pub fn verify<R: RepHandle<Vector = V>>(&self, rep: &R, w: &V) -> Result<GiveVerification> {
        let rebuilt = self.certificate.evaluate(rep, w)?;
        Ok(GiveVerification {
            nonzero: !rep.is_zero(&self.v),
            i1_fixed: is_i1_fixed(rep, &self.v)?,
            irreducible: k_span(rep, &self.v)?.verdict == KSpanVerdict::Irreducible,
            certificate_in_p: self.certificate.terms().iter().all(|(_, g)| g.is_upper_triangular()),
            certificate_reproduces: rebuilt == self.v,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "tau_dim": self.tau_dim,
            "fixed_dim": self.fixed_dim,
            "averaging_character": [self.averaging_character.0, self.averaging_character.1],
            "shortcut": self.next.is_none(),
            "lemma_next": self.next.as_ref().map(|n| n.to_json()),
            "certificate_terms": self.certificate.terms().len(),
        })
    }
}

/// From nonzero `w`, a nonzero `I_1`-fixed `v ∈ ⟨P·w⟩` with irreducible `K`-span.
pub fn prop_give<R: RepHandle>(rep: &R, w: &R::Vector) -> Result<GiveOutcome<R::Vector>> {
    let p = rep.p();
    let f = rep.field();
    if rep.is_zero(w) {
        return Err(Error::HypothesisViolated("prop_give needs a nonzero vector".into()));
    }
    let q = |x: i128| PadicRational::from_int(p, x);

    if is_i1_fixed(rep, w)? {
        if let Some(character) = iwahori_character(rep, w)? {
            if k_span(rep, w)?.verdict == KSpanVerdict::Irreducible {
                return Ok(GiveOutcome {
                    v: w.clone(),
                    k: 0,
                    tau_dim: 1,
                    fixed_dim: 1,
                    averaging_character: character,
                    next: None,
                    certificate: TranslateCombination::single(f.one(), Mat2::identity(p)),
                });
            }
        }
    }

    let mut k = 0;
    loop {
        let g = Mat2::lower(PadicRational::p_power(p, k as i64 + 1));
        if rep.act(&g, w)? == *w {
            break;
        }
        k += 1;
        if k > MAX_SMOOTHNESS_EXPONENT {
            return Err(Error::ModelInconsistency("no lower(p^(k+1)) fixes the input".into()));
        }
    }
    let tk = (0..k).fold(Mat2::identity(p), |acc, _| acc * Mat2::t(p));
    let w1 = rep.act(&tk, w)?;

    let tau = translate_span(rep, &w1, &i1_borel_generators(p), SPAN_LIMIT)?;
    let fixed = fixed_in_span(rep, &tau, &i1_generators(p))?;
    let coeffs = fixed.first().ok_or_else(|| Error::ModelInconsistency("pro-p group without fixed vector".into()))?;
    let mut w2_cert = TranslateCombination::default();
    for &(i, c) in coeffs.entries() {
        w2_cert.push(c, tau.words[i] * tk);
    }
    let w2 = w2_cert.evaluate(rep, w)?;

    let units: Vec<u32> = (1..p).collect();
    let mut averaged = None;
    'search: for i1 in 0..p - 1 {
        for i2 in 0..p - 1 {
            let mut cert = TranslateCombination::default();
            let mut acc = rep.zero();
            for &a in &units {
                for &d in &units {
                    let h = Mat2::diag(q(a as i128), q(d as i128));
                    let c = f.from_int(a as i64).inv().pow(i1 as u64) * f.from_int(d as i64).inv().pow(i2 as u64);
                    acc = rep.add_scaled(&acc, &rep.act(&h, &w2)?, c);
                    cert.add_transformed(&w2_cert, c, &h);
                }
            }
            if !rep.is_zero(&acc) {
                averaged = Some(((i1, i2), acc, cert));
                break 'search;
            }
        }
    }
    let (averaging_character, w3, w3_cert) = averaged.ok_or(Error::AveragingFailed)?;

    let next = lemma_next(rep, &w3)?;
    let mut certificate = TranslateCombination::default();
    for (l, g) in ut_translates(p).iter().enumerate() {
        let c = f.from_int(l as i64).pow(next.j as u64);
        certificate.add_transformed(&w3_cert, c, g);
    }
    Ok(GiveOutcome {
        v: next.w.clone(),
        k,
        tau_dim: tau.dim(),
        fixed_dim: fixed.len(),
        averaging_character,
        next: Some(next),
        certificate,
    })
}
