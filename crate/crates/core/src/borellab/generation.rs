//! Truncated evidence that `P` alone generates the supersingular quotients:
//! spans of short `P`-words applied to a vector, compared with the image of a
//! ball.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::rep::{CindQuotientRep, RepHandle};
use super::{Check, EvidenceReport, Status};
use crate::compactind::Ball;
use crate::error::{Error, Result};
use crate::exactfield::{rank, Echelon, SparseVec};
use crate::padicmat::{unit_generators, Mat2, PadicRational};

/// `u(1), u(1/p), t, t⁻¹` and `diag(γ, 1), diag(1, γ)` for topological
/// generators `γ` of `Z_p^×`.
pub fn p_generators(p: u32) -> Vec<Mat2> {
    let q = |x: i128| PadicRational::from_int(p, x);
    let mut gens = vec![
        Mat2::upper(q(1)),
        Mat2::upper(PadicRational::new(p, 1, p as i128)),
        Mat2::t(p),
        Mat2::t(p).inverse().expect("invertible"),
    ];
    for u in unit_generators(p) {
        gens.push(Mat2::diag(q(u), q(1)));
        gens.push(Mat2::diag(q(1), q(u)));
    }
    gens
}

/// Normal forms spanning the image of the radius-`r` ball, and the dimension of
/// that image computed independently as `rank[C_r; P(T)C_r] - rank P(T)C_r`
/// inside the radius-`r + deg` ball.
pub fn generation_target(rep: &CindQuotientRep, radius: i64) -> Result<(Vec<SparseVec>, usize, usize)> {
    let model = rep.model();
    let weight = model.weight();
    let field = weight.field();
    let ball = model.ball();
    let target: Vec<SparseVec> = (0..ball.dim())
        .filter(|&c| ball.slot(c).0.distance() <= radius)
        .map(|c| model.reduce(&SparseVec::unit(c, field)))
        .collect();
    let mut ech = Echelon::new(field);
    for v in &target {
        ech.insert(v);
    }

    let Some(ideal) = model.ideal().cloned() else {
        return Ok((target, ech.dim(), Ball::new(weight, radius).dim()));
    };
    let inner = Ball::new(weight, radius);
    let outer = Ball::new(weight, radius + ideal.degree() as i64);
    let mut plain = Vec::new();
    let mut images = Vec::new();
    for c in 0..inner.dim() {
        let e = inner.basis_element(c);
        plain.push(outer.coords(&e)?.to_dense(outer.dim(), field));
        let img = model.hecke().apply_poly(&ideal, &e);
        images.push(outer.coords(&img)?.to_dense(outer.dim(), field));
    }
    let image_rank = rank(field, &images, outer.dim())?;
    let both: Vec<_> = plain.into_iter().chain(images).collect();
    let oracle = rank(field, &both, outer.dim())? - image_rank;
    Ok((target, ech.dim(), oracle))
}

#[derive(Debug, Clone)]
pub struct GenerationTrial {
    /// Span dimension after words of length `0, 1, …, L`.
    pub span_dims: Vec<usize>,
    /// Translates dropped because they left the working ball.
    pub pruned: usize,
    pub contains_target: bool,
    pub missing: usize,
}

impl GenerationTrial {
    pub fn to_json(&self) -> Value {
        json!({
            "span_dims": self.span_dims,
            "pruned": self.pruned,
            "contains_target": self.contains_target,
            "missing": self.missing,
        })
    }
}

/// Span of all words of length at most `word_length` in [`p_generators`]
/// applied to `w`, and whether it contains `target`.
pub fn generation_trial(
    rep: &CindQuotientRep,
    w: &SparseVec,
    target: &[SparseVec],
    word_length: usize,
) -> Result<GenerationTrial> {
    let gens = p_generators(rep.p());
    let mut ech = Echelon::new(rep.field());
    let mut frontier = Vec::new();
    if ech.insert(w) {
        frontier.push(w.clone());
    }
    let mut span_dims = vec![ech.dim()];
    let mut pruned = 0;
    for _ in 0..word_length {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                match rep.act(g, x) {
                    Ok(y) => {
                        if ech.insert(&y) {
                            next.push(y);
                        }
                    }
                    Err(Error::TruncationTooSmall { .. }) => pruned += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        span_dims.push(ech.dim());
        frontier = next;
    }
    let missing = target.iter().filter(|v| !ech.contains(v)).count();
    Ok(GenerationTrial { span_dims, pruned, contains_target: missing == 0, missing })
}

/// Runs [`generation_trial`] on `trials` random vectors of the radius-`r_target`
/// ball, after checking the target dimension against the oracle.
pub fn p_generation_evidence(
    rep: &CindQuotientRep,
    trials: usize,
    r_target: i64,
    word_length: usize,
    seed: u64,
) -> Result<EvidenceReport> {
    let certification = json!({
        "working_radius": rep.model().radius(),
        "target_radius": r_target,
        "word_length": word_length,
    });
    let mut report = EvidenceReport::new(
        "generation",
        json!({ "model": rep.describe(), "trials": trials, "r_target": r_target, "word_length": word_length }),
        Some(seed),
    );
    let (target, model_dim, oracle_dim) = generation_target(rep, r_target)?;
    report.push(Check::new(
        "generation-target-oracle",
        Status::from_bool(model_dim == oracle_dim),
        json!({ "model_dim": model_dim, "oracle_dim": oracle_dim }),
        certification.clone(),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..trials {
        let w = rep.random_vector(&mut rng, r_target);
        let trial = generation_trial(rep, &w, &target, word_length)?;
        let status = if trial.contains_target {
            Status::Pass
        } else if model_dim <= 1 {
            Status::Fail
        } else {
            Status::Inconclusive
        };
        let mut details = trial.to_json();
        if !trial.contains_target {
            details["note"] = json!("insufficient depth");
        }
        details["target_dim"] = json!(model_dim);
        report.push(Check::new(format!("generation-trial-{i}"), status, details, certification.clone()));
    }
    Ok(report)
}
