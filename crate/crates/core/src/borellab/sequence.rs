//! The sequence `v_{i+1} = Σ_λ u(ℓ_λ) t v_i` and the reconstruction of `s·v`
//! from `P`-translates once the sum vanishes.

use serde_json::{json, Value};

use super::rep::{hecke_sum, is_i1_fixed, RepHandle};
use crate::error::{Error, Result};
use crate::padicmat::{unit_lift, Mat2, PadicRational};

pub const DEFAULT_BOUND: usize = 10;

#[derive(Debug, Clone)]
pub struct RecursionOutcome<V> {
    pub sequence: Vec<V>,
    /// Least `n` with `v_n = 0`, if reached within the bound.
    pub n: Option<usize>,
    pub bound: usize,
    pub i1_fixed: Vec<bool>,
}

impl<V: Clone + PartialEq> RecursionOutcome<V> {
    /// `v_{n-1}`, the last nonzero term of a terminating sequence.
    pub fn last_nonzero(&self) -> Option<&V> {
        match self.n {
            Some(n) if n >= 1 => self.sequence.get(n - 1),
            _ => None,
        }
    }

    /// Recomputes each step and each fixedness flag from `v₀`.
    pub fn verify<R: RepHandle<Vector = V>>(&self, rep: &R) -> Result<bool> {
        let Some(v0) = self.sequence.first() else {
            return Ok(false);
        };
        let mut cur = v0.clone();
        for (i, v) in self.sequence.iter().enumerate() {
            if *v != cur || !is_i1_fixed(rep, v)? || !self.i1_fixed[i] {
                return Ok(false);
            }
            if i + 1 < self.sequence.len() {
                cur = hecke_sum(rep, v)?;
            }
        }
        let terminal_ok = match self.n {
            Some(n) => n + 1 == self.sequence.len() && rep.is_zero(&self.sequence[n]),
            None => self.sequence.iter().all(|v| !rep.is_zero(v)) && self.sequence.len() == self.bound + 1,
        };
        Ok(terminal_ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "terminated": self.n.is_some(),
            "bound": self.bound,
            "length": self.sequence.len(),
            "i1_fixed": self.i1_fixed,
        })
    }
}

/// Iterates `v_{i+1} = Σ_λ u(ℓ_λ) t v_i` from `I_1`-fixed `v₀` until a term
/// vanishes or `bound` steps were taken.
pub fn recursion<R: RepHandle>(rep: &R, v0: &R::Vector, bound: usize) -> Result<RecursionOutcome<R::Vector>> {
    if !is_i1_fixed(rep, v0)? {
        return Err(Error::HypothesisViolated("v0 is not I_1-fixed".into()));
    }
    let mut sequence = vec![v0.clone()];
    let mut i1_fixed = vec![true];
    let mut n = None;
    loop {
        let i = sequence.len() - 1;
        if rep.is_zero(&sequence[i]) {
            n = Some(i);
            break;
        }
        if i == bound {
            break;
        }
        let next = hecke_sum(rep, &sequence[i])?;
        i1_fixed.push(is_i1_fixed(rep, &next)?);
        sequence.push(next);
    }
    Ok(RecursionOutcome { sequence, n, bound, i1_fixed })
}

/// `[[-p/ℓ, 1], [0, ℓ/p]]` for `ℓ = 1, …, p-1`.
pub fn s_reconstruction_elements(p: u32) -> Vec<Mat2> {
    (1..p)
        .map(|l| {
            let l = unit_lift(p, l);
            let pp = PadicRational::from_int(p, p as i128);
            Mat2::new(
                -(pp.div(&l).expect("unit")),
                PadicRational::one(p),
                PadicRational::zero(p),
                l.div(&pp).expect("p"),
            )
        })
        .collect()
}

/// `-Σ_{λ≠0} [[-p/ℓ_λ, 1], [0, ℓ_λ/p]] · v`.
pub fn s_from_borel<R: RepHandle>(rep: &R, v: &R::Vector) -> Result<R::Vector> {
    let minus = -rep.field().one();
    let mut acc = rep.zero();
    for b in s_reconstruction_elements(rep.p()) {
        acc = rep.add_scaled(&acc, &rep.act(&b, v)?, minus);
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct LemmaSOutcome<V> {
    pub direct: V,
    pub reconstructed: V,
    pub pass: bool,
}

impl<V> LemmaSOutcome<V> {
    pub fn to_json(&self) -> Value {
        json!({ "pass": self.pass })
    }
}

/// Compares `s·v` with its reconstruction from `P`-translates, for `I_1`-fixed
/// `v` with `Σ_λ u(ℓ_λ) t v = 0`.
pub fn lemma_s_check<R: RepHandle>(rep: &R, v: &R::Vector) -> Result<LemmaSOutcome<R::Vector>> {
    if !is_i1_fixed(rep, v)? {
        return Err(Error::HypothesisViolated("v is not I_1-fixed".into()));
    }
    if !rep.is_zero(&hecke_sum(rep, v)?) {
        return Err(Error::HypothesisViolated("sum of u(l) t v is nonzero".into()));
    }
    let direct = rep.act(&Mat2::s(rep.p()), v)?;
    let reconstructed = s_from_borel(rep, v)?;
    let pass = direct == reconstructed;
    Ok(LemmaSOutcome { direct, reconstructed, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borellab::rep::{CindQuotientRep, PrincipalSeriesRep};
    use crate::compactind::HeckeIdeal;
    use crate::exactfield::Field;
    use crate::fqweights::{TorusCharacter, Weight};
    use crate::principalseries::make_phi2;

    fn quotient(p: u32, r: u32, m: u32, ideal: &str, radius: i64) -> CindQuotientRep {
        let f = Field::prime(p).unwrap();
        let w = Weight::new(f, r, m).unwrap();
        CindQuotientRep::new(w, Some(HeckeIdeal::parse(f, ideal).unwrap()), radius).unwrap()
    }

    #[test]
    fn terminates_at_one_and_two() {
        let rep = quotient(3, 1, 0, "T", 3);
        let out = recursion(&rep, &rep.phi().unwrap(), DEFAULT_BOUND).unwrap();
        assert_eq!(out.n, Some(1));
        assert!(out.verify(&rep).unwrap());
        let rep = quotient(3, 1, 0, "T^2", 3);
        let out = recursion(&rep, &rep.phi().unwrap(), DEFAULT_BOUND).unwrap();
        assert_eq!(out.n, Some(2));
        assert!(out.verify(&rep).unwrap());
    }

    #[test]
    fn principal_series_does_not_terminate() {
        let f = Field::prime(3).unwrap();
        let rep = PrincipalSeriesRep::new(TorusCharacter::trivial(f), 4);
        let out = recursion(&rep, &make_phi2(&rep.chi()), DEFAULT_BOUND).unwrap();
        assert_eq!(out.n, None);
        assert_eq!(out.sequence.len(), DEFAULT_BOUND + 1);
        assert!(out.verify(&rep).unwrap());
    }

    #[test]
    fn lemma_s_on_phi_and_guard() {
        let rep = quotient(3, 1, 0, "T", 3);
        assert!(lemma_s_check(&rep, &rep.phi().unwrap()).unwrap().pass);
        let rep = quotient(3, 1, 0, "T^2", 3);
        assert!(matches!(lemma_s_check(&rep, &rep.phi().unwrap()), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn trivial_weight_terminating_stage() {
        let rep = quotient(3, 0, 0, "T", 3);
        let out = recursion(&rep, &rep.phi().unwrap(), DEFAULT_BOUND).unwrap();
        let n = out.n.expect("terminates");
        assert!(n >= 1);
        assert!(lemma_s_check(&rep, out.last_nonzero().unwrap()).unwrap().pass);
    }
}
