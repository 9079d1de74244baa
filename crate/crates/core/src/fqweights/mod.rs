//! Finite-group layer: Serre weights `Sym^r ⊗ det^m` of `GL_2(F_p)` inflated
//! to `K`, tame torus characters, the induced module `Ind_I^K χ`, and an
//! irreducibility test for small `GL_2(F_p)`-modules.
//!
//! Convention: a matrix `g` acts on polynomials by `(g·P)(x, y) = P((x, y)·g)`,
//! i.e. `x ↦ ax + cy`, `y ↦ bx + dy`, twisted by `det^m`. This is a left
//! action, `s` swaps `x` and `y`, and `x^r` spans the `I_1`-fixed line.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactfield::{
    identity_matrix, kernel_basis, mat_mul, mat_vec, Echelon, Field, FieldElem, Matrix, SparseVec,
};
use crate::padicmat::{i1_generators, Mat2, PadicRational, SubgroupTag};

/// The irreducible `K`-representation `Sym^r ⊗ det^m` over a coefficient field.
/// Vectors are coordinate arrays over the basis `x^r, x^{r-1}y, …, y^r`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    field: Field,
    r: u32,
    m: u32,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Exponents `(e1, e2)` of a character `diag(a, d) ↦ a^{e1} d^{e2}` of `I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IwahoriCharacter {
    pub e1: u32,
    pub e2: u32,
}

fn check_ranges(p: u32, r: u32, m: u32) -> Result<()> {
    if r > p - 1 {
        return Err(Error::InvalidConfig(format!("weight r = {r} must satisfy 0 <= r <= p-1 = {}", p - 1)));
    }
    if m >= (p - 1).max(1) {
        return Err(Error::InvalidConfig(format!("weight m = {m} must satisfy 0 <= m < p-1 = {}", p - 1)));
    }
    Ok(())
}

/// Reduction mod `p` of `x ∈ Z_p` into the coefficient field.
pub fn reduce(field: Field, x: &PadicRational) -> Result<FieldElem> {
    Ok(field.from_int(x.residue(1)? as i64))
}

impl Weight {
    pub fn new(field: Field, r: u32, m: u32) -> Result<Weight> {
        check_ranges(field.p(), r, m)?;
        Ok(Weight { field, r, m })
    }

    /// The Steinberg weight `Sym^{p-1}`.
    pub fn steinberg(field: Field) -> Weight {
        Weight { field, r: field.p() - 1, m: 0 }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.r as usize + 1
    }

    /// Weights of dimension one are characters `ψ ∘ det`.
    pub fn is_character(&self) -> bool {
        self.r == 0
    }

    pub fn label(&self) -> String {
        format!("Sym^{} det^{}", self.r, self.m)
    }

    pub fn zero_vector(&self) -> Vec<FieldElem> {
        vec![self.field.zero(); self.dim()]
    }

    /// Action matrix (columns are images of basis monomials) for the residue
    /// matrix `[[a, b], [c, d]]` in `GL_2(F_p)`.
    pub fn residue_matrix(&self, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Matrix {
        let f = self.field;
        let r = self.r as usize;
        let det = (a * d - b * c).pow(self.m as u64);
        // powers of the linear forms ax + cy and bx + dy, as coefficient lists in x^{n-j} y^j
        let powers = |s: FieldElem, t: FieldElem| -> Vec<Vec<FieldElem>> {
            let mut out = vec![vec![f.one()]];
            for n in 1..=r {
                let prev = &out[n - 1];
                let mut next = vec![f.zero(); n + 1];
                for (j, &x) in prev.iter().enumerate() {
                    next[j] += x * s;
                    next[j + 1] += x * t;
                }
                out.push(next);
            }
            out
        };
        let first = powers(a, c);
        let second = powers(b, d);
        let mut mat = vec![vec![f.zero(); r + 1]; r + 1];
        for i in 0..=r {
            // basis monomial x^{r-i} y^i
            let lhs = &first[r - i];
            let rhs = &second[i];
            for (j1, &u) in lhs.iter().enumerate() {
                for (j2, &w) in rhs.iter().enumerate() {
                    mat[j1 + j2][i] += u * w * det;
                }
            }
        }
        mat
    }

    /// Action matrix of `k`; central powers of `p` are stripped first.
    pub fn matrix(&self, k: &Mat2) -> Result<Matrix> {
        let (_, k0) = k.strip_center();
        if !k0.in_subgroup(SubgroupTag::K) {
            return Err(Error::NotIntegral(format!("{k:?} is not in K modulo the centre")));
        }
        let f = self.field;
        let [a, b, c, d] = k0.entries().map(|x| reduce(f, &x).expect("integral"));
        Ok(self.residue_matrix(a, b, c, d))
    }

    pub fn act(&self, k: &Mat2, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {}", v.len(), self.label())));
        }
        Ok(mat_vec(&self.matrix(k)?, v))
    }

    /// The weight as a finite module for the standard generators of `GL_2(F_p)`.
    pub fn module(&self) -> FiniteKModule {
        let gens = gl2_generators(self.p()).iter().map(|g| self.matrix(g).expect("generators lie in K")).collect();
        FiniteKModule::new(self.field, self.dim(), gens, self.label())
    }
}

/// `weight_action(w, k, v)`: the action of `k ∈ K·Z` on `v ∈ w`.
pub fn weight_action(w: &Weight, k: &Mat2, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
    w.act(k, v)
}

/// Spanning vector of `σ^{I_1}` (first nonzero coordinate normalized to 1) and
/// the character of `I` on it, cross-checked against the computed action.
pub fn i1_fixed_line(w: &Weight) -> Result<(Vec<FieldElem>, IwahoriCharacter)> {
    let f = w.field;
    let n = w.dim();
    let mut system: Matrix = Vec::new();
    for g in i1_generators(w.p()) {
        let m = w.matrix(&g)?;
        for (i, row) in m.into_iter().enumerate() {
            let mut row = row;
            row[i] -= f.one();
            system.push(row);
        }
    }
    let kernel = kernel_basis(f, &system, n)?;
    if kernel.len() != 1 {
        return Err(Error::WeightModelBroken(format!(
            "I_1-fixed space of {} has dimension {}",
            w.label(),
            kernel.len()
        )));
    }
    let mut v = kernel.into_iter().next().unwrap();
    let lead = *v.iter().find(|x| !x.is_zero()).expect("nonzero kernel vector");
    let inv = lead.inv();
    for x in v.iter_mut() {
        *x *= inv;
    }
    let chi = IwahoriCharacter { e1: w.r + w.m, e2: w.m };
    // verify against the torus action
    let gen = crate::exactfield::primitive_root(w.p()) as i128;
    let q = |x| PadicRational::from_int(w.p(), x);
    for (mat, e) in [(Mat2::diag(q(gen), q(1)), chi.e1), (Mat2::diag(q(1), q(gen)), chi.e2)] {
        let image = w.act(&mat, &v)?;
        let scalar = f.from_int(gen as i64).pow(e as u64);
        if image.iter().zip(&v).any(|(a, b)| *a != *b * scalar) {
            return Err(Error::WeightModelBroken(format!("unexpected I-character on {}", w.label())));
        }
    }
    Ok((v, chi))
}

/// A tame character of `T(Q_p)`: `diag(α, δ) ↦ s1^{v(α)} s2^{v(δ)} ω(α₀)^{i1} ω(δ₀)^{i2}`
/// where `α₀, δ₀` are the unit parts and `ω` is reduction mod `p`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct TorusCharacter {
    field: Field,
    i1: u32,
    i2: u32,
    s1: FieldElem,
    s2: FieldElem,
}

impl fmt::Debug for TorusCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl TorusCharacter {
    pub fn new(field: Field, i1: u32, i2: u32, s1: FieldElem, s2: FieldElem) -> Result<TorusCharacter> {
        if s1.field() != field || s2.field() != field {
            return Err(Error::FieldMismatch);
        }
        if s1.is_zero() || s2.is_zero() {
            return Err(Error::InvalidConfig("character values s1, s2 must be nonzero".into()));
        }
        let n = field.p() - 1;
        let (i1, i2) = if n == 1 { (0, 0) } else { (i1 % n, i2 % n) };
        Ok(TorusCharacter { field, i1, i2, s1, s2 })
    }

    pub fn trivial(field: Field) -> TorusCharacter {
        TorusCharacter { field, i1: 0, i2: 0, s1: field.one(), s2: field.one() }
    }

    /// `ψ ∘ det` with `ψ(u) = ω(u)^i` on units and `ψ(p) = s`.
    pub fn det_character(field: Field, i: u32, s: FieldElem) -> Result<TorusCharacter> {
        TorusCharacter::new(field, i, i, s, s)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn exponents(&self) -> (u32, u32) {
        (self.i1, self.i2)
    }

    pub fn scalars(&self) -> (FieldElem, FieldElem) {
        (self.s1, self.s2)
    }

    pub fn is_trivial(&self) -> bool {
        self.i1 == 0 && self.i2 == 0 && self.s1.is_one() && self.s2.is_one()
    }

    /// `χ^s(diag(a, d)) = χ(diag(d, a))`.
    pub fn conjugate(&self) -> TorusCharacter {
        TorusCharacter { i1: self.i2, i2: self.i1, s1: self.s2, s2: self.s1, ..*self }
    }

    pub fn is_s_invariant(&self) -> bool {
        *self == self.conjugate()
    }

    /// The character `ψ` on `Q_p^×` when `χ = ψ ∘ det`.
    pub fn as_det_character(&self) -> Option<(u32, FieldElem)> {
        self.is_s_invariant().then_some((self.i1, self.s1))
    }

    pub fn label(&self) -> String {
        format!("({},{};{},{})", self.i1, self.i2, self.s1.code(), self.s2.code())
    }

    /// Value of the unit character `ω^i` at a `p`-adic unit.
    fn unit_value(&self, i: u32, u: &PadicRational) -> FieldElem {
        let res = u.residue(1).expect("unit");
        self.field.from_int(res as i64).pow(i as u64)
    }

    fn scalar_value(&self, x: &PadicRational, s: FieldElem, i: u32) -> FieldElem {
        let v = x.valuation().finite().expect("nonzero diagonal entry");
        let unit = x.unit_part().expect("nonzero");
        let sp = if v >= 0 { s.pow(v as u64) } else { s.inv().pow((-v) as u64) };
        sp * self.unit_value(i, &unit)
    }

    /// `χ(diag(α, δ))`.
    pub fn value_diag(&self, alpha: &PadicRational, delta: &PadicRational) -> FieldElem {
        self.scalar_value(alpha, self.s1, self.i1) * self.scalar_value(delta, self.s2, self.i2)
    }

    /// `χ(b)` for `b ∈ P`, through its diagonal.
    pub fn value(&self, b: &Mat2) -> FieldElem {
        debug_assert!(b.in_subgroup(SubgroupTag::P));
        self.value_diag(&b.a, &b.d)
    }

    /// Restriction to `I` through `I → T(F_p)`: `diag(a, d) ↦ a^{i1} d^{i2}`.
    pub fn iwahori_value(&self, a: FieldElem, d: FieldElem) -> FieldElem {
        a.pow(self.i1 as u64) * d.pow(self.i2 as u64)
    }

    pub fn to_json(&self) -> Value {
        json!(self.label())
    }
}

/// The standard generators of `GL_2(F_p)` lifted to `K`: `u(1), s, diag(g, 1), diag(1, g)`.
pub fn gl2_generators(p: u32) -> Vec<Mat2> {
    let q = |x| PadicRational::from_int(p, x);
    let g = crate::exactfield::primitive_root(p) as i128;
    vec![Mat2::upper(q(1)), Mat2::s(p), Mat2::diag(q(g), q(1)), Mat2::diag(q(1), q(g))]
}

/// A finite-dimensional `GL_2(F_p)`-module given by the action matrices of
/// [`gl2_generators`] (in that order).
#[derive(Debug, Clone)]
pub struct FiniteKModule {
    field: Field,
    dim: usize,
    gens: Vec<Matrix>,
    provenance: String,
}

/// Eigenvalues of `diag(g,1)` and `diag(1,g)` with a basis of the eigenspace.
pub type TorusEigenspace = ((FieldElem, FieldElem), Vec<Vec<FieldElem>>);

/// Verdict of [`is_irreducible`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A basis of a proper nonzero submodule.
    Reducible(Vec<Vec<FieldElem>>),
    Inconclusive,
}

impl FiniteKModule {
    pub fn new(field: Field, dim: usize, gens: Vec<Matrix>, provenance: impl Into<String>) -> FiniteKModule {
        assert_eq!(gens.len(), 4, "expects matrices for u(1), s, diag(g,1), diag(1,g)");
        FiniteKModule { field, dim, gens, provenance: provenance.into() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Checks the defining relations `u^p = s^2 = 1`, `h^{p-1} = 1` and
    /// `s·diag(g,1)·s = diag(1,g)` on the action matrices.
    pub fn check_relations(&self) -> bool {
        let id = identity_matrix(self.field, self.dim);
        let pow = |m: &Matrix, n: u32| (0..n).fold(id.clone(), |acc, _| mat_mul(&acc, m));
        let p = self.field.p();
        let [u, s, h1, h2] = [&self.gens[0], &self.gens[1], &self.gens[2], &self.gens[3]];
        pow(u, p) == id
            && mat_mul(s, s) == id
            && pow(h1, p - 1) == id
            && pow(h2, p - 1) == id
            && mat_mul(&mat_mul(s, h1), s) == *h2
            && mat_mul(h1, h2) == mat_mul(h2, h1)
    }

    /// Smallest submodule containing `vectors`, as an echelon basis.
    pub fn span(&self, vectors: &[Vec<FieldElem>]) -> Echelon {
        let mut ech = Echelon::new(self.field);
        let mut queue: Vec<Vec<FieldElem>> = Vec::new();
        for v in vectors {
            if ech.insert(&SparseVec::from_dense(v)) {
                queue.push(v.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for g in &self.gens {
                let w = mat_vec(g, &v);
                if ech.insert(&SparseVec::from_dense(&w)) {
                    queue.push(w);
                }
            }
        }
        ech
    }

    fn fixed_system(&self, pieces: &[(&Matrix, FieldElem)]) -> Matrix {
        let mut rows = Vec::new();
        for (m, c) in pieces {
            for (i, row) in m.iter().enumerate() {
                let mut row = row.clone();
                row[i] -= *c;
                rows.push(row);
            }
        }
        rows
    }

    /// Simultaneous eigenspaces of the torus on the `U`-fixed vectors, keyed by
    /// the eigenvalues of `diag(g,1)` and `diag(1,g)`.
    pub fn torus_eigenspaces(&self) -> Vec<TorusEigenspace> {
        let f = self.field;
        let one = f.one();
        let units: Vec<FieldElem> = (1..f.p() as i64).map(|x| f.from_int(x)).collect();
        let mut out = Vec::new();
        for &c1 in &units {
            for &c2 in &units {
                let system = self.fixed_system(&[(&self.gens[0], one), (&self.gens[2], c1), (&self.gens[3], c2)]);
                let kernel = kernel_basis(f, &system, self.dim).expect("square system");
                if !kernel.is_empty() {
                    out.push(((c1, c2), kernel));
                }
            }
        }
        out
    }
}

/// Largest number of lines enumerated inside a degenerate eigenspace before
/// falling back to random probes.
const LINE_ENUMERATION_LIMIT: u64 = 4096;
const RANDOM_PROBES: usize = 64;

fn lines(field: Field, basis: &[Vec<FieldElem>]) -> Vec<Vec<FieldElem>> {
    // normalized coefficient vectors: leading coefficient 1
    let q = field.order();
    let d = basis.len();
    let mut out = Vec::new();
    for lead in 0..d {
        let free = d - lead - 1;
        for code in 0..q.pow(free as u32) {
            let mut coeffs = vec![field.zero(); d];
            coeffs[lead] = field.one();
            let mut c = code;
            for slot in coeffs.iter_mut().skip(lead + 1) {
                *slot = field.from_code(c % q);
                c /= q;
            }
            out.push(combine(field, basis, &coeffs));
        }
    }
    out
}

fn combine(field: Field, basis: &[Vec<FieldElem>], coeffs: &[FieldElem]) -> Vec<FieldElem> {
    let n = basis[0].len();
    let mut v = vec![field.zero(); n];
    for (b, &c) in basis.iter().zip(coeffs) {
        for (x, y) in v.iter_mut().zip(b) {
            *x += c * *y;
        }
    }
    v
}

fn echelon_basis(ech: &Echelon, dim: usize) -> Vec<Vec<FieldElem>> {
    ech.rows().iter().map(|r| r.to_dense(dim, ech.field())).collect()
}

/// Irreducibility test via `U`-fixed torus eigenvectors: every nonzero
/// submodule contains one, so the module is irreducible iff each of them
/// generates everything.
pub fn is_irreducible(module: &FiniteKModule) -> Irreducibility {
    is_irreducible_seeded(module, 0x5eed)
}

pub fn is_irreducible_seeded(module: &FiniteKModule, seed: u64) -> Irreducibility {
    use rand::{Rng, SeedableRng};

    let dim = module.dim();
    if dim == 0 {
        return Irreducibility::Reducible(Vec::new());
    }
    let f = module.field();
    let mut inconclusive = false;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let check = |v: &Vec<FieldElem>| -> Option<Vec<Vec<FieldElem>>> {
        let span = module.span(std::slice::from_ref(v));
        (span.dim() < dim).then(|| echelon_basis(&span, dim))
    };
    for (_, space) in module.torus_eigenspaces() {
        if space.len() == 1 {
            if let Some(w) = check(&space[0]) {
                return Irreducibility::Reducible(w);
            }
            continue;
        }
        let count = f.order().checked_pow(space.len() as u32).unwrap_or(u64::MAX);
        if count <= LINE_ENUMERATION_LIMIT {
            for v in lines(f, &space) {
                if let Some(w) = check(&v) {
                    return Irreducibility::Reducible(w);
                }
            }
        } else {
            for _ in 0..RANDOM_PROBES {
                let coeffs: Vec<FieldElem> =
                    (0..space.len()).map(|_| f.from_code(rng.gen_range(0..f.order()))).collect();
                let v = combine(f, &space, &coeffs);
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                if let Some(w) = check(&v) {
                    return Irreducibility::Reducible(w);
                }
            }
            inconclusive = true;
        }
    }
    if inconclusive {
        Irreducibility::Inconclusive
    } else {
        Irreducibility::Irreducible
    }
}

/// `dim Hom(a, b)`: the solutions `X` of `X·A_g = B_g·X` over the generators.
pub fn hom_dimension(a: &FiniteKModule, b: &FiniteKModule) -> Result<usize> {
    let f = a.field();
    if f != b.field() {
        return Err(Error::FieldMismatch);
    }
    let (da, db) = (a.dim(), b.dim());
    // unknown X[i][j] sits at column i * da + j
    let mut system: Matrix = Vec::new();
    for (ga, gb) in a.generators().iter().zip(b.generators()) {
        for i in 0..db {
            for k in 0..da {
                let mut row = vec![f.zero(); da * db];
                for j in 0..da {
                    row[i * da + j] += ga[j][k];
                }
                for j in 0..db {
                    row[j * da + k] -= gb[i][j];
                }
                system.push(row);
            }
        }
    }
    Ok(kernel_basis(f, &system, da * db)?.len())
}

/// Every tame character `(i₁, i₂; s₁, s₂)` with nonzero scalars in `field`.
pub fn tame_characters(field: Field) -> Vec<TorusCharacter> {
    let p = field.p();
    let units: Vec<FieldElem> = field.elements().filter(|x| !x.is_zero()).collect();
    let mut out = Vec::new();
    for i1 in 0..(p - 1).max(1) {
        for i2 in 0..(p - 1).max(1) {
            for &s1 in &units {
                for &s2 in &units {
                    out.push(TorusCharacter::new(field, i1, i2, s1, s2).expect("valid ranges"));
                }
            }
        }
    }
    out
}

/// Every submodule (including `0` and the whole module), as echelon bases,
/// found by closing the cyclic submodules under sums. `None` when the module
/// has more than `limit` vectors.
pub fn submodules(module: &FiniteKModule, limit: u64) -> Option<Vec<Vec<Vec<FieldElem>>>> {
    let f = module.field();
    let dim = module.dim();
    let count = f.order().checked_pow(dim as u32).filter(|&c| c <= limit)?;
    let all: Vec<Vec<FieldElem>> = (0..count)
        .map(|mut code| {
            (0..dim)
                .map(|_| {
                    let x = f.from_code(code % f.order());
                    code /= f.order();
                    x
                })
                .collect()
        })
        .collect();
    let key = |ech: &Echelon| -> Vec<bool> { all.iter().map(|v| ech.contains(&SparseVec::from_dense(v))).collect() };
    let mut seen = std::collections::BTreeSet::new();
    let mut found: Vec<Vec<Vec<FieldElem>>> = Vec::new();
    let mut push = |ech: Echelon, found: &mut Vec<Vec<Vec<FieldElem>>>| {
        if seen.insert(key(&ech)) {
            found.push(echelon_basis(&ech, dim));
        }
    };
    push(Echelon::new(f), &mut found);
    for v in &all {
        push(module.span(std::slice::from_ref(v)), &mut found);
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let joined: Vec<Vec<FieldElem>> = found[i].iter().chain(&found[j]).cloned().collect();
            push(module.span(&joined), &mut found);
        }
        i += 1;
    }
    Some(found)
}

/// Position of `[[a, b], [c, d]]` among the coset representatives of
/// `B(F_p) \ GL_2(F_p)` (`lower(λ)` for `λ = 0..p-1`, then `s`), together
/// with the diagonal of the Borel factor.
fn coset_of(p: u32, b: FieldElem, c: FieldElem, d: FieldElem, det: FieldElem) -> (usize, FieldElem, FieldElem) {
    if !d.is_zero() {
        let x = c * d.inv();
        let idx = x.as_prime().expect("prime field residue") as usize;
        (idx, det * d.inv(), d)
    } else {
        (p as usize, b, c)
    }
}

/// `Ind_I^K χ` realized on functions on `B(F_p)\GL_2(F_p) ≅ P^1(F_p)` with
/// `f(bk) = χ(b) f(k)` and `(k·f)(x) = f(xk)`. Coordinates are the values at
/// `lower(0), …, lower(p-1), s`.
pub fn induce_from_iwahori(chi: &TorusCharacter) -> FiniteKModule {
    let f = chi.field();
    let p = f.p();
    let n = p as usize + 1;
    let reps: Vec<[FieldElem; 4]> = (0..p as i64)
        .map(|l| [f.one(), f.zero(), f.from_int(l), f.one()])
        .chain(std::iter::once([f.zero(), f.one(), f.one(), f.zero()]))
        .collect();
    let gens = gl2_generators(p)
        .iter()
        .map(|g| {
            let [ga, gb, gc, gd] = g.entries().map(|x| reduce(f, &x).expect("integral"));
            let mut m = vec![vec![f.zero(); n]; n];
            for (i, rep) in reps.iter().enumerate() {
                let [ra, rb, rc, rd] = *rep;
                let (a, b, c, d) = (ra * ga + rb * gc, ra * gb + rb * gd, rc * ga + rd * gc, rc * gb + rd * gd);
                let det = a * d - b * c;
                let (z, alpha, delta) = coset_of(p, b, c, d, det);
                m[i][z] = chi.iwahori_value(alpha, delta);
            }
            m
        })
        .collect();
    FiniteKModule::new(f, n, gens, format!("Ind_I^K {}", chi.label()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: u32, x: i128) -> PadicRational {
        PadicRational::from_int(p, x)
    }

    #[test]
    fn action_examples() {
        let f = Field::prime(5).unwrap();
        let w = Weight::new(f, 1, 0).unwrap();
        let v = vec![f.from_int(2), f.from_int(3)];
        assert_eq!(w.act(&Mat2::identity(5), &v).unwrap(), v);
        assert_eq!(w.act(&Mat2::s(5), &v).unwrap(), vec![f.from_int(3), f.from_int(2)]);
        let w = Weight::new(f, 0, 3).unwrap();
        let out = w.act(&Mat2::scalar(q(5, 2)), &[f.one()]).unwrap();
        assert_eq!(out, vec![f.from_int(4).pow(3)]);
    }

    #[test]
    fn not_integral_is_rejected() {
        let f = Field::prime(3).unwrap();
        let w = Weight::new(f, 1, 0).unwrap();
        let g = Mat2::upper(PadicRational::new(3, 1, 3));
        assert!(matches!(w.act(&g, &w.zero_vector()), Err(Error::NotIntegral(_))));
        // central powers of p are harmless
        assert!(w.act(&Mat2::scalar(q(3, 9)), &w.zero_vector()).is_ok());
    }

    #[test]
    fn fixed_line_examples() {
        let f = Field::prime(3).unwrap();
        let (v, chi) = i1_fixed_line(&Weight::new(f, 0, 0).unwrap()).unwrap();
        assert_eq!(v, vec![f.one()]);
        assert_eq!(chi, IwahoriCharacter { e1: 0, e2: 0 });
        let (v, chi) = i1_fixed_line(&Weight::steinberg(f)).unwrap();
        assert_eq!(v, vec![f.one(), f.zero(), f.zero()]);
        assert_eq!(chi, IwahoriCharacter { e1: 2, e2: 0 });
        let f5 = Field::prime(5).unwrap();
        let (v, _) = i1_fixed_line(&Weight::new(f5, 1, 0).unwrap()).unwrap();
        assert_eq!(v, vec![f5.one(), f5.zero()]);
    }

    #[test]
    fn induced_module_dimension_and_relations() {
        for p in [2, 3, 5] {
            let f = Field::prime(p).unwrap();
            let m = induce_from_iwahori(&TorusCharacter::trivial(f));
            assert_eq!(m.dim(), p as usize + 1);
            assert!(m.check_relations());
        }
    }

    #[test]
    fn irreducibility_examples() {
        let f = Field::prime(3).unwrap();
        for r in 0..3 {
            for m in 0..2 {
                assert_eq!(is_irreducible(&Weight::new(f, r, m).unwrap().module()), Irreducibility::Irreducible);
            }
        }
        let ind = induce_from_iwahori(&TorusCharacter::trivial(f));
        match is_irreducible(&ind) {
            Irreducibility::Reducible(w) => {
                assert_eq!(w.len(), 1);
                assert!(w[0].iter().all(|x| *x == w[0][0]), "constants line");
            }
            other => panic!("{other:?}"),
        }
        let f5 = Field::prime(5).unwrap();
        assert_eq!(is_irreducible(&Weight::steinberg(f5).module()), Irreducibility::Irreducible);
    }

    #[test]
    fn characters() {
        let f = Field::prime(5).unwrap();
        let chi = TorusCharacter::new(f, 1, 2, f.from_int(2), f.from_int(3)).unwrap();
        assert_eq!(chi.label(), "(1,2;2,3)");
        assert!(!chi.is_s_invariant());
        assert_eq!(chi.conjugate().label(), "(2,1;3,2)");
        // diag(5·2, 3): s1 · 2^1 · 3^2
        let v = chi.value_diag(&q(5, 10), &q(5, 3));
        assert_eq!(v, f.from_int(2 * 2 * 9));
        assert!(TorusCharacter::new(f, 0, 0, f.zero(), f.one()).is_err());
    }

    #[test]
    fn submodule_lattice_of_induced_trivial() {
        for p in [2, 3] {
            let f = Field::prime(p).unwrap();
            let subs = submodules(&induce_from_iwahori(&TorusCharacter::trivial(f)), 4096).unwrap();
            let mut dims: Vec<usize> = subs.iter().map(|b| b.len()).collect();
            dims.sort();
            assert_eq!(dims, vec![0, 1, p as usize, p as usize + 1]);
        }
        let f = Field::prime(3).unwrap();
        let subs = submodules(&Weight::new(f, 2, 0).unwrap().module(), 4096).unwrap();
        assert_eq!(subs.len(), 2);
    }

    #[test]
    fn hom_dimensions_between_weights() {
        let f = Field::prime(3).unwrap();
        let weights: Vec<Weight> = (0..3).flat_map(|r| (0..2).map(move |m| Weight::new(f, r, m).unwrap())).collect();
        for a in &weights {
            for b in &weights {
                assert_eq!(hom_dimension(&a.module(), &b.module()).unwrap(), usize::from(a == b), "{a:?} {b:?}");
            }
        }
        let ind = induce_from_iwahori(&TorusCharacter::trivial(f));
        assert_eq!(hom_dimension(&Weight::new(f, 0, 0).unwrap().module(), &ind).unwrap(), 1);
        assert_eq!(hom_dimension(&Weight::steinberg(f).module(), &ind).unwrap(), 1);
        assert_eq!(tame_characters(f).len(), 16);
    }
}
