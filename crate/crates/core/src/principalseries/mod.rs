//! Smooth principal series `Ind_P^G χ` for tame `χ`, at finite level.
//!
//! A function with `f(bg) = χ(b) f(g)` that is right invariant under
//! `K(N) = 1 + p^N M_2(Z_p)` is stored as its values on the points of
//! `P^1(Z/p^N)`: first `[x : 1]` (representative `lower(x)`, `0 ≤ x < p^N`),
//! then `[1 : py]` (representative `s·u(py)`, `0 ≤ y < p^{N-1}`). The action is
//! right translation, `(g·f)(h) = f(hg)`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactfield::{column_kernel, FieldElem, SparseVec};
use crate::fqweights::TorusCharacter;
use crate::padicmat::{i1_generators, ipow_i128, unit_lift, Mat2, PadicRational};

/// Default largest level.
pub const DEFAULT_N_MAX: u32 = 4;

/// A level-`N` vector of `Ind_P^G χ`.
#[derive(Clone)]
pub struct PSFunction {
    chi: TorusCharacter,
    level: u32,
    values: Vec<FieldElem>,
}

impl fmt::Debug for PSFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "PS{}@{}[{}]", self.chi.label(), self.level, vals.join(","))
    }
}

impl PartialEq for PSFunction {
    /// Equality as functions on `G`, refining to a common level.
    fn eq(&self, other: &Self) -> bool {
        if self.chi != other.chi {
            return false;
        }
        let n = self.level.max(other.level);
        self.refine(n).values == other.refine(n).values
    }
}

/// Number of points of `P^1(Z/p^N)`.
pub fn point_count(p: u32, level: u32) -> usize {
    (ipow_i128(p, level) + ipow_i128(p, level - 1)) as usize
}

/// Representative matrix of a point.
pub fn point_rep(p: u32, level: u32, index: usize) -> Mat2 {
    let q = |x: i128| PadicRational::from_int(p, x);
    let big = ipow_i128(p, level) as usize;
    if index < big {
        Mat2::lower(q(index as i128))
    } else {
        Mat2::s(p) * Mat2::upper(q(p as i128 * (index - big) as i128))
    }
}

impl PSFunction {
    pub fn zero(chi: TorusCharacter, level: u32) -> PSFunction {
        assert!(level >= 1, "levels start at 1");
        let n = point_count(chi.p(), level);
        PSFunction { chi, level, values: vec![chi.field().zero(); n] }
    }

    pub fn from_values(chi: TorusCharacter, level: u32, values: Vec<FieldElem>) -> Result<PSFunction> {
        if level == 0 || values.len() != point_count(chi.p(), level) {
            return Err(Error::DimensionMismatch(format!("{} values at level {level}", values.len())));
        }
        Ok(PSFunction { chi, level, values })
    }

    pub fn chi(&self) -> TorusCharacter {
        self.chi
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[FieldElem] {
        &self.values
    }

    pub fn p(&self) -> u32 {
        self.chi.p()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|x| x.is_zero())
    }

    /// `f(1)`.
    pub fn eval_at_identity(&self) -> FieldElem {
        self.values[0]
    }

    /// `f(g)` for any invertible `g`.
    pub fn evaluate(&self, g: &Mat2) -> FieldElem {
        let p = self.p();
        let det = g.det();
        let big = ipow_i128(p, self.level);
        if g.c.valuation() >= g.d.valuation() {
            let x = g.c.div(&g.d).expect("d is nonzero here");
            let idx = x.residue(self.level).expect("integral") as usize;
            self.chi.value_diag(&det.div(&g.d).unwrap(), &g.d) * self.values[idx]
        } else {
            let y = g.d.div(&g.c).expect("c is nonzero here") * PadicRational::new(p, 1, p as i128);
            let idx = big as usize + y.residue(self.level - 1).expect("integral") as usize;
            self.chi.value_diag(&(-(det.div(&g.c).unwrap())), &g.c) * self.values[idx]
        }
    }

    /// The same function tabulated at a higher level.
    pub fn refine(&self, level: u32) -> PSFunction {
        if level <= self.level {
            return self.clone();
        }
        let p = self.p();
        let values = (0..point_count(p, level)).map(|i| self.evaluate(&point_rep(p, level, i))).collect();
        PSFunction { chi: self.chi, level, values }
    }

    /// Level needed to tabulate `g·f`.
    pub fn required_level(&self, g: &Mat2) -> u32 {
        let m1 = g.min_valuation().finite().expect("nonzero");
        let m2 = g.inverse().expect("invertible").min_valuation().finite().expect("nonzero");
        (self.level as i64 - m1 - m2).max(1) as u32
    }

    /// `g·f`, tabulated at the level its invariance requires.
    pub fn act(&self, g: &Mat2, n_max: u32) -> Result<PSFunction> {
        let level = self.required_level(g);
        if level > n_max {
            return Err(Error::LevelOverflow { required: level, max: n_max });
        }
        let p = self.p();
        let values = (0..point_count(p, level)).map(|i| self.evaluate(&(point_rep(p, level, i) * *g))).collect();
        Ok(PSFunction { chi: self.chi, level, values })
    }

    pub fn add_scaled(&self, other: &PSFunction, c: FieldElem) -> PSFunction {
        assert_eq!(self.chi, other.chi, "adding functions of different characters");
        let n = self.level.max(other.level);
        let (a, b) = (self.refine(n), other.refine(n));
        let values = a.values.iter().zip(&b.values).map(|(x, y)| *x + *y * c).collect();
        PSFunction { chi: self.chi, level: n, values }
    }

    pub fn add(&self, other: &PSFunction) -> PSFunction {
        self.add_scaled(other, self.chi.field().one())
    }

    pub fn sub(&self, other: &PSFunction) -> PSFunction {
        self.add_scaled(other, -self.chi.field().one())
    }

    pub fn scale(&self, c: FieldElem) -> PSFunction {
        PSFunction { values: self.values.iter().map(|x| *x * c).collect(), ..self.clone() }
    }

    /// Pointwise product with `ψ ∘ det`, which carries `Ind χ` to `Ind (χ ⊗ ψ∘det)`.
    pub fn twist(&self, i: u32, s: FieldElem) -> Result<PSFunction> {
        let f = self.chi.field();
        let (i1, i2) = self.chi.exponents();
        let (s1, s2) = self.chi.scalars();
        let chi = TorusCharacter::new(f, i1 + i, i2 + i, s1 * s, s2 * s)?;
        let psi = TorusCharacter::det_character(f, i, s)?;
        let p = self.p();
        let values = (0..self.values.len())
            .map(|j| {
                let rep = point_rep(p, self.level, j);
                self.values[j] * psi.value_diag(&rep.det(), &PadicRational::one(p))
            })
            .collect();
        Ok(PSFunction { chi, level: self.level, values })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "chi": self.chi.label(),
            "level": self.level,
            "values": self.values.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// `ps_act(g, f)` with the default level bound.
pub fn ps_act(g: &Mat2, f: &PSFunction) -> Result<PSFunction> {
    f.act(g, DEFAULT_N_MAX)
}

/// `φ₁`: supported on `P I_1`, with `φ₁(1) = 1`.
pub fn make_phi1(chi: &TorusCharacter) -> PSFunction {
    let mut f = PSFunction::zero(*chi, 1);
    f.values[0] = chi.field().one();
    f
}

/// `φ₂ = Σ_λ u(ℓ_λ) s · φ₁`.
pub fn make_phi2(chi: &TorusCharacter) -> PSFunction {
    let p = chi.p();
    let phi1 = make_phi1(chi);
    (0..p).fold(PSFunction::zero(*chi, 1), |acc, l| {
        let g = Mat2::upper(unit_lift(p, l)) * Mat2::s(p);
        acc.add(&phi1.act(&g, DEFAULT_N_MAX).expect("level stays at 1"))
    })
}

/// `Σ_μ u(ℓ_μ) t · f`.
pub fn hecke_sum(f: &PSFunction, n_max: u32) -> Result<PSFunction> {
    let p = f.p();
    let mut acc = PSFunction::zero(f.chi(), f.level());
    for l in 0..p {
        let g = Mat2::upper(unit_lift(p, l)) * Mat2::t(p);
        acc = acc.add(&f.act(&g, n_max)?);
    }
    Ok(acc)
}

/// Basis of the `I_1`-fixed vectors at level `N`.
pub fn i1_invariants(chi: &TorusCharacter, level: u32, n_max: u32) -> Result<Vec<PSFunction>> {
    if level > n_max {
        return Err(Error::LevelOverflow { required: level, max: n_max });
    }
    let f = chi.field();
    let n = point_count(chi.p(), level);
    let gens = i1_generators(chi.p());
    let columns: Vec<SparseVec> = (0..n)
        .map(|j| {
            let mut e = PSFunction::zero(*chi, level);
            e.values[j] = f.one();
            let mut col = Vec::new();
            for (gi, g) in gens.iter().enumerate() {
                let moved = e.act(g, n_max).expect("I_1 keeps the level").sub(&e);
                col.extend(moved.values.iter().enumerate().map(|(i, x)| (gi * n + i, *x)));
            }
            SparseVec::from_pairs(col)
        })
        .collect();
    Ok(column_kernel(f, &columns)
        .into_iter()
        .map(|k| PSFunction { chi: *chi, level, values: k.to_dense(n, f) })
        .collect())
}

/// The scalar `λ` with `Σ_μ u(ℓ_μ) t · φ₂ = λ φ₂`.
pub fn eigen_relation(chi: &TorusCharacter) -> Result<FieldElem> {
    let phi2 = make_phi2(chi);
    let w = hecke_sum(&phi2, DEFAULT_N_MAX)?;
    let pivot = phi2
        .values
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::ModelInconsistency("phi_2 vanishes".into()))?;
    let lambda = w.refine(phi2.level).values[pivot] * phi2.values[pivot].inv();
    if w != phi2.scale(lambda) {
        return Err(Error::ModelInconsistency("Σ u t φ₂ is not proportional to φ₂".into()));
    }
    if lambda.is_zero() {
        return Err(Error::ModelInconsistency("eigenvalue is zero".into()));
    }
    Ok(lambda)
}

/// The `P`-splitting of `0 → κ_χ → Ind χ → χ → 0` for `χ = ψ ∘ det`.
#[derive(Debug, Clone)]
pub struct DetSplitting {
    chi: TorusCharacter,
    psi_exponent: u32,
    psi_p: FieldElem,
}

pub fn split_for_det_character(chi: &TorusCharacter) -> Result<DetSplitting> {
    let (i, s) = chi.as_det_character().ok_or(Error::NotDetCharacter)?;
    Ok(DetSplitting { chi: *chi, psi_exponent: i, psi_p: s })
}

impl DetSplitting {
    pub fn chi(&self) -> TorusCharacter {
        self.chi
    }

    /// `ψ(x)` for `x ∈ Q_p^×`.
    pub fn psi(&self, x: &PadicRational) -> FieldElem {
        TorusCharacter::det_character(self.chi.field(), self.psi_exponent, self.psi_p)
            .expect("valid")
            .value_diag(x, &PadicRational::one(x.p()))
    }

    /// `c ↦ c·(ψ ∘ det)`.
    pub fn include(&self, c: FieldElem) -> PSFunction {
        let p = self.chi.p();
        let values = (0..point_count(p, 1)).map(|j| c * self.psi(&point_rep(p, 1, j).det())).collect();
        PSFunction { chi: self.chi, level: 1, values }
    }

    /// `f ↦ f(1)`.
    pub fn project(&self, f: &PSFunction) -> FieldElem {
        f.eval_at_identity()
    }

    /// `f - include(f(1))`, which lies in `κ_χ`.
    pub fn kappa_part(&self, f: &PSFunction) -> PSFunction {
        f.sub(&self.include(self.project(f)))
    }

    /// `κ_1 → κ_χ`: pointwise multiplication by `ψ ∘ det` (the model of `Sp ⊗ ψ∘det`).
    pub fn sp_to_kappa(&self, f: &PSFunction) -> Result<PSFunction> {
        if !f.chi().is_trivial() {
            return Err(Error::InvalidConfig("expected a vector of Ind(1)".into()));
        }
        f.twist(self.psi_exponent, self.psi_p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;

    fn q(p: u32, x: i128) -> PadicRational {
        PadicRational::from_int(p, x)
    }

    #[test]
    fn phi_examples() {
        for p in [2, 3, 5] {
            let f = Field::prime(p).unwrap();
            let chi = TorusCharacter::trivial(f);
            let phi1 = make_phi1(&chi);
            let phi2 = make_phi2(&chi);
            assert!(phi1.eval_at_identity().is_one());
            assert!(phi2.eval_at_identity().is_zero());
            assert!(!phi2.is_zero());
            // trivial character: φ₁ + φ₂ is the constant function
            let sum = phi1.add(&phi2);
            assert!(sum.values().iter().all(|x| x.is_one()), "p = {p}: {sum:?}");
        }
    }

    #[test]
    fn action_examples() {
        let f = Field::prime(3).unwrap();
        let chi = TorusCharacter::new(f, 1, 0, f.from_int(2), f.one()).unwrap();
        let phi1 = make_phi1(&chi);
        assert_eq!(ps_act(&Mat2::identity(3), &phi1).unwrap(), phi1);
        let b = Mat2::new(q(3, 6), q(3, 1), q(3, 0), q(3, 1));
        let moved = ps_act(&b, &phi1).unwrap();
        assert_eq!(moved.eval_at_identity(), chi.value(&b) * phi1.eval_at_identity());
        let triv = TorusCharacter::trivial(f);
        let c = make_phi2(&triv);
        assert_eq!(ps_act(&Mat2::scalar(q(3, 2)), &c).unwrap(), c);
    }

    #[test]
    fn level_overflow() {
        let f = Field::prime(2).unwrap();
        let phi1 = make_phi1(&TorusCharacter::trivial(f));
        let g = Mat2::upper(PadicRational::new(2, 1, 16));
        assert!(matches!(ps_act(&g, &phi1), Err(Error::LevelOverflow { .. })));
    }

    #[test]
    fn invariants_have_dimension_two() {
        let f = Field::prime(3).unwrap();
        let chi = TorusCharacter::trivial(f);
        assert_eq!(i1_invariants(&chi, 1, DEFAULT_N_MAX).unwrap().len(), 2);
        assert_eq!(i1_invariants(&chi, 2, DEFAULT_N_MAX).unwrap().len(), 2);
    }

    #[test]
    fn splitting_examples() {
        let f = Field::prime(3).unwrap();
        let chi = TorusCharacter::det_character(f, 1, f.from_int(2)).unwrap();
        let sp = split_for_det_character(&chi).unwrap();
        assert!(sp.project(&sp.include(f.one())).is_one());
        let phi1 = make_phi1(&chi);
        assert!(sp.kappa_part(&phi1).eval_at_identity().is_zero());
        assert!(sp.project(&make_phi2(&chi)).is_zero());
        let bad = TorusCharacter::new(f, 1, 0, f.one(), f.one()).unwrap();
        assert!(matches!(split_for_det_character(&bad), Err(Error::NotDetCharacter)));
    }
}
