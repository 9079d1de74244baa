//! Exact arithmetic in `GL_2(Q_p)` on matrices with rational entries, and the
//! coset decompositions used throughout: Iwasawa `G = PK`, the cover
//! `G = P I_1 ∪ P s I_1`, subgroup membership and vertex normal forms for
//! `G / KZ` (the vertices of the Bruhat-Tits tree).

mod rational;

pub(crate) use rational::ipow as ipow_i128;
pub use rational::{PadicRational, Valuation};

use std::fmt;
use std::ops::Mul;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A 2×2 matrix `[[a, b], [c, d]]` over `Q ⊂ Q_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: PadicRational,
    pub b: PadicRational,
    pub c: PadicRational,
    pub d: PadicRational,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl Mat2 {
    pub fn new(a: PadicRational, b: PadicRational, c: PadicRational, d: PadicRational) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(p: u32, a: i128, b: i128, c: i128, d: i128) -> Mat2 {
        let q = |x| PadicRational::from_int(p, x);
        Mat2::new(q(a), q(b), q(c), q(d))
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    pub fn identity(p: u32) -> Mat2 {
        Mat2::from_ints(p, 1, 0, 0, 1)
    }

    /// Upper unipotent `u(x) = [[1, x], [0, 1]]`.
    pub fn upper(x: PadicRational) -> Mat2 {
        let p = x.p();
        Mat2::new(PadicRational::one(p), x, PadicRational::zero(p), PadicRational::one(p))
    }

    /// Lower unipotent `[[1, 0], [x, 1]]`.
    pub fn lower(x: PadicRational) -> Mat2 {
        let p = x.p();
        Mat2::new(PadicRational::one(p), PadicRational::zero(p), x, PadicRational::one(p))
    }

    pub fn diag(x: PadicRational, y: PadicRational) -> Mat2 {
        let p = x.p();
        Mat2::new(x, PadicRational::zero(p), PadicRational::zero(p), y)
    }

    pub fn scalar(x: PadicRational) -> Mat2 {
        Mat2::diag(x, x)
    }

    /// `s = [[0, 1], [1, 0]]`.
    pub fn s(p: u32) -> Mat2 {
        Mat2::from_ints(p, 0, 1, 1, 0)
    }

    /// `t = diag(p, 1)`.
    pub fn t(p: u32) -> Mat2 {
        Mat2::from_ints(p, p as i128, 0, 0, 1)
    }

    /// `Π = [[0, 1], [p, 0]]`.
    pub fn pi(p: u32) -> Mat2 {
        Mat2::from_ints(p, 0, 1, p as i128, 0)
    }

    pub fn det(&self) -> PadicRational {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let inv_det = self.det().inv().map_err(|_| Error::Singular)?;
        Ok(Mat2::new(self.d * inv_det, -self.b * inv_det, -self.c * inv_det, self.a * inv_det))
    }

    pub fn scale(&self, x: PadicRational) -> Mat2 {
        Mat2::new(self.a * x, self.b * x, self.c * x, self.d * x)
    }

    pub fn entries(&self) -> [PadicRational; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Minimal valuation of the entries (finite for nonzero matrices).
    pub fn min_valuation(&self) -> Valuation {
        self.entries().iter().map(|e| e.valuation()).min().expect("four entries")
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|e| e.is_integral())
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.c.is_zero()
    }

    fn require_invertible(&self) -> Result<()> {
        if self.det().is_zero() {
            Err(Error::Singular)
        } else {
            Ok(())
        }
    }

    /// Entries reduced mod `p^level`; requires an integral matrix.
    pub fn residues(&self, level: u32) -> Result<[i128; 4]> {
        Ok([self.a.residue(level)?, self.b.residue(level)?, self.c.residue(level)?, self.d.residue(level)?])
    }

    /// Splits off the central power of `p`: returns `(j, k)` with `self = p^j · k`
    /// and the entries of `k` of minimal valuation 0.
    pub fn strip_center(&self) -> (i64, Mat2) {
        let j = self.min_valuation().finite().expect("nonzero matrix");
        (j, self.scale(PadicRational::p_power(self.p(), -j)))
    }

    /// Serialized as four `"c/p^e"` literals.
    pub fn to_json(&self) -> Value {
        json!([self.a.to_literal(), self.b.to_literal(), self.c.to_literal(), self.d.to_literal()])
    }

    pub fn in_subgroup(&self, tag: SubgroupTag) -> bool {
        let one = PadicRational::one(self.p());
        let v = |x: PadicRational| x.valuation();
        let k = || self.is_integral() && self.det().is_unit();
        match tag {
            SubgroupTag::K => k(),
            SubgroupTag::I => k() && v(self.c).at_least(1),
            SubgroupTag::I1 => {
                k() && v(self.c).at_least(1) && v(self.a - one).at_least(1) && v(self.d - one).at_least(1)
            }
            SubgroupTag::K1 => {
                k() && v(self.b).at_least(1)
                    && v(self.c).at_least(1)
                    && v(self.a - one).at_least(1)
                    && v(self.d - one).at_least(1)
            }
            SubgroupTag::P => self.c.is_zero() && !self.det().is_zero(),
            SubgroupTag::TDiag => self.b.is_zero() && self.c.is_zero() && !self.det().is_zero(),
            SubgroupTag::UUpper => self.c.is_zero() && self.a.is_one() && self.d.is_one(),
            SubgroupTag::Center => self.b.is_zero() && self.c.is_zero() && self.a == self.d && !self.a.is_zero(),
        }
    }
}

/// Subgroups of `G` with decidable membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupTag {
    K,
    K1,
    I,
    I1,
    P,
    TDiag,
    UUpper,
    Center,
}

/// `g = b · k` with `b` upper triangular and `k ∈ K`.
pub fn iwasawa(g: &Mat2) -> Result<(Mat2, Mat2)> {
    g.require_invertible()?;
    let p = g.p();
    let (zero, one) = (PadicRational::zero(p), PadicRational::one(p));
    let det = g.det();
    if g.d.valuation() <= g.c.valuation() {
        let x = g.c.div(&g.d)?;
        let k = Mat2::lower(x);
        let b = Mat2::new(det.div(&g.d)?, g.b, zero, g.d);
        Ok((b, k))
    } else {
        let y = g.d.div(&g.c)?;
        let k = Mat2::new(zero, one, one, y);
        let b = Mat2::new(-(det.div(&g.c)?), g.a, zero, g.c);
        Ok((b, k))
    }
}

/// Which piece of `G = P I_1 ∪ P s I_1` an element lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BruhatSide {
    PI1,
    PsI1,
}

impl BruhatSide {
    pub fn name(&self) -> &'static str {
        match self {
            BruhatSide::PI1 => "PI1",
            BruhatSide::PsI1 => "PsI1",
        }
    }
}

/// `g = b · u` (side `PI1`) or `g = b · s · u` (side `PsI1`) with `b ∈ P`, `u ∈ I_1`.
/// The side is `PI1` exactly when `v(c) > v(d)`.
pub fn bruhat_side(g: &Mat2) -> Result<(BruhatSide, Mat2, Mat2)> {
    g.require_invertible()?;
    let p = g.p();
    let zero = PadicRational::zero(p);
    let det = g.det();
    if g.c.valuation() > g.d.valuation() {
        let u = Mat2::lower(g.c.div(&g.d)?);
        let b = Mat2::new(det.div(&g.d)?, g.b, zero, g.d);
        Ok((BruhatSide::PI1, b, u))
    } else {
        let u = Mat2::upper(g.d.div(&g.c)?);
        let b = Mat2::new(-(det.div(&g.c)?), g.a, zero, g.c);
        Ok((BruhatSide::PsI1, b, u))
    }
}

/// A vertex of the Bruhat-Tits tree: the coset `[[p^d, a], [0, 1]] · KZ`,
/// with `a` the canonical representative of its class in `Q_p / p^d Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub d: i64,
    pub a: PadicRational,
}

impl TreeVertex {
    pub fn base(p: u32) -> TreeVertex {
        TreeVertex { d: 0, a: PadicRational::zero(p) }
    }

    /// Canonicalizing constructor.
    pub fn new(d: i64, a: PadicRational) -> TreeVertex {
        TreeVertex { d, a: a.reduce_mod_p_power(d) }
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    /// The representative matrix `[[p^d, a], [0, 1]]`.
    pub fn matrix(&self) -> Mat2 {
        let p = self.p();
        Mat2::new(PadicRational::p_power(p, self.d), self.a, PadicRational::zero(p), PadicRational::one(p))
    }

    /// Distance from the base vertex.
    pub fn distance(&self) -> i64 {
        let m = self.a.valuation().min(Valuation::Finite(self.d)).min(Valuation::Finite(0));
        self.d - 2 * m.finite().expect("finite")
    }

    pub fn to_json(&self) -> Value {
        json!({"d": self.d, "a": self.a.to_literal()})
    }

    /// The `p + 1` neighbours, in a fixed order.
    pub fn neighbours(&self) -> Vec<TreeVertex> {
        let p = self.p();
        let g = self.matrix();
        let mut out: Vec<TreeVertex> =
            (0..p as i128).map(|l| vertex_normalize(&(g * Mat2::from_ints(p, p as i128, l, 0, 1))).0).collect();
        out.push(vertex_normalize(&(g * Mat2::from_ints(p, 1, 0, 0, p as i128))).0);
        out
    }
}

/// `g = rep(v) · kz` with `kz ∈ KZ`; the vertex `v` is canonical.
pub fn vertex_normalize(g: &Mat2) -> (TreeVertex, Mat2) {
    let (b, _) = iwasawa(g).expect("vertex_normalize needs an invertible matrix");
    let ratio = b.a.div(&b.d).expect("invertible");
    let d = ratio.valuation().finite().expect("nonzero");
    let y = b.b.div(&b.d).expect("invertible");
    let v = TreeVertex::new(d, y);
    let kz = v.matrix().inverse().expect("invertible") * *g;
    debug_assert!(kz.strip_center().1.in_subgroup(SubgroupTag::K), "kz = {kz:?} for g = {g:?}");
    (v, kz)
}

/// Distance in the tree between the base vertex and `g · base`:
/// `v(det g) - 2 · min entry valuation`.
pub fn tree_distance(g: &Mat2) -> i64 {
    let vdet = g.det().valuation().finite().expect("invertible");
    let m = g.min_valuation().finite().expect("nonzero");
    vdet - 2 * m
}

/// Integer lift `λ ∈ {0, …, p-1}` standing in for the Teichmüller lift.
pub fn unit_lift(p: u32, lambda: u32) -> PadicRational {
    assert!(lambda < p, "residue out of range");
    PadicRational::from_int(p, lambda as i128)
}

/// Topological generators of `1 + pZ_p`.
pub fn principal_unit_generators(p: u32) -> Vec<i128> {
    if p == 2 {
        vec![3, 5]
    } else {
        vec![1 + p as i128]
    }
}

/// Topological generators of `Z_p^×`.
pub fn unit_generators(p: u32) -> Vec<i128> {
    if p == 2 {
        return vec![3, 5];
    }
    let g = crate::exactfield::primitive_root(p) as i128;
    let p2 = (p * p) as i128;
    // g or g + p generates (Z/p^2)^×, hence Z_p^×
    let order_p2 = |x: i128| {
        let mut y = x % p2;
        let mut n = 1;
        while y != 1 {
            y = y * x % p2;
            n += 1;
        }
        n
    };
    if order_p2(g) == (p as i128) * (p as i128 - 1) {
        vec![g]
    } else {
        vec![g + p as i128]
    }
}

/// Topological generators of `I_1`.
pub fn i1_generators(p: u32) -> Vec<Mat2> {
    let q = |x| PadicRational::from_int(p, x);
    let mut gens = vec![Mat2::upper(q(1)), Mat2::lower(q(p as i128))];
    for u in principal_unit_generators(p) {
        gens.push(Mat2::diag(q(u), q(1)));
        gens.push(Mat2::diag(q(1), q(u)));
    }
    gens
}

/// Topological generators of `I_1 ∩ P`.
pub fn i1_borel_generators(p: u32) -> Vec<Mat2> {
    i1_generators(p).into_iter().filter(|g| g.in_subgroup(SubgroupTag::P)).collect()
}

/// Topological generators of `K = GL_2(Z_p)`.
pub fn k_generators(p: u32) -> Vec<Mat2> {
    let q = |x| PadicRational::from_int(p, x);
    let mut gens = vec![Mat2::upper(q(1)), Mat2::lower(q(1)), Mat2::s(p)];
    for u in unit_generators(p) {
        gens.push(Mat2::diag(q(u), q(1)));
    }
    gens
}

/// Topological generators of `K_1`.
pub fn k1_generators(p: u32) -> Vec<Mat2> {
    let q = |x| PadicRational::from_int(p, x);
    let mut gens = vec![Mat2::upper(q(p as i128)), Mat2::lower(q(p as i128))];
    for u in principal_unit_generators(p) {
        gens.push(Mat2::diag(q(u), q(1)));
        gens.push(Mat2::diag(q(1), q(u)));
    }
    gens
}
