//! Results of the library compared with brute-force enumeration.

use std::collections::{BTreeSet, HashSet, VecDeque};

use borel_workbench::compactind::Ball;
use borel_workbench::exactfield::{mat_vec, rank, solve_linear, Field, FieldElem, LinearSolution};
use borel_workbench::fqweights::{i1_fixed_line, induce_from_iwahori, FiniteKModule, TorusCharacter, Weight};
use borel_workbench::padicmat::{i1_generators, TreeVertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_vectors(f: Field, n: usize) -> Vec<Vec<FieldElem>> {
    let elems: Vec<FieldElem> = f.elements().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |&x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn dot(a: &[FieldElem], b: &[FieldElem], f: Field) -> FieldElem {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| acc + *x * *y)
}

#[test]
fn solve_linear_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [2, 3] {
        let f = Field::prime(p).unwrap();
        let candidates = all_vectors(f, 3);
        for _ in 0..200 {
            let a: Vec<Vec<FieldElem>> =
                (0..3).map(|_| (0..3).map(|_| f.from_int(rng.gen_range(0..p as i64))).collect()).collect();
            let b: Vec<FieldElem> = (0..3).map(|_| f.from_int(rng.gen_range(0..p as i64))).collect();
            let solutions: Vec<&Vec<FieldElem>> = candidates.iter().filter(|x| mat_vec(&a, x) == b).collect();
            match solve_linear(f, &a, 3, &b).unwrap() {
                LinearSolution::Solvable { solution, kernel } => {
                    assert_eq!(mat_vec(&a, &solution), b);
                    assert_eq!(solutions.len() as u64, (p as u64).pow(kernel.len() as u32));
                    for k in &kernel {
                        assert!(mat_vec(&a, k).iter().all(|x| x.is_zero()));
                    }
                }
                LinearSolution::Inconsistent { certificate } => {
                    assert!(solutions.is_empty());
                    for col in 0..3 {
                        let column: Vec<FieldElem> = a.iter().map(|r| r[col]).collect();
                        assert!(dot(&certificate, &column, f).is_zero());
                    }
                    assert!(!dot(&certificate, &b, f).is_zero());
                }
            }
            let image: HashSet<Vec<FieldElem>> = candidates.iter().map(|x| mat_vec(&a, x)).collect();
            assert_eq!((p as usize).pow(rank(f, &a, 3).unwrap() as u32), image.len());
        }
    }
}

/// Every subspace of `F_p^n`, one reduced row echelon basis each.
fn subspaces(f: Field, n: usize) -> Vec<Vec<Vec<FieldElem>>> {
    let p = f.p() as i64;
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let pivots: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        // free slots: (row, col) with col > pivot of row and col not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| ((pc + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        for code in 0..p.pow(free.len() as u32) {
            let mut rows = vec![vec![f.zero(); n]; pivots.len()];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = f.one();
            }
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = f.from_int(c % p);
                c /= p;
            }
            out.push(rows);
        }
    }
    out
}

fn is_invariant(module: &FiniteKModule, basis: &[Vec<FieldElem>]) -> bool {
    let f = module.field();
    let n = module.dim();
    let members: HashSet<Vec<FieldElem>> = all_vectors(f, basis.len())
        .into_iter()
        .map(|c| {
            let mut v = vec![f.zero(); n];
            for (b, x) in basis.iter().zip(&c) {
                for (slot, y) in v.iter_mut().zip(b) {
                    *slot += *x * *y;
                }
            }
            v
        })
        .collect();
    module.generators().iter().all(|g| basis.iter().all(|b| members.contains(&mat_vec(g, b))))
}

#[test]
fn induced_trivial_lattice_by_enumerating_subspaces() {
    for p in [2, 3] {
        let f = Field::prime(p).unwrap();
        let ind = induce_from_iwahori(&TorusCharacter::trivial(f));
        let mut dims: Vec<usize> =
            subspaces(f, ind.dim()).into_iter().filter(|b| is_invariant(&ind, b)).map(|b| b.len()).collect();
        dims.sort();
        assert_eq!(dims, vec![0, 1, p as usize, p as usize + 1], "p = {p}");
    }
}

#[test]
fn weights_have_no_invariant_subspaces() {
    for p in [2, 3] {
        let f = Field::prime(p).unwrap();
        for r in 0..p {
            for m in 0..(p - 1).max(1) {
                let module = Weight::new(f, r, m).unwrap().module();
                let count = subspaces(f, module.dim()).iter().filter(|b| is_invariant(&module, b)).count();
                assert_eq!(count, 2, "Sym^{r} det^{m} at p = {p}");
            }
        }
    }
}

#[test]
fn i1_fixed_vectors_form_one_line() {
    for p in [2, 3, 5] {
        let f = Field::prime(p).unwrap();
        for r in 0..p {
            let w = Weight::new(f, r, 0).unwrap();
            let gens: Vec<_> = i1_generators(p).iter().map(|g| w.matrix(g).unwrap()).collect();
            let fixed: Vec<Vec<FieldElem>> =
                all_vectors(f, w.dim()).into_iter().filter(|v| gens.iter().all(|g| mat_vec(g, v) == *v)).collect();
            assert_eq!(fixed.len(), p as usize, "Sym^{r} at p = {p}");
            let (line, _) = i1_fixed_line(&w).unwrap();
            assert!(fixed.contains(&line));
        }
    }
}

#[test]
fn ball_vertices_match_a_breadth_first_search() {
    for p in [2, 3, 5] {
        let f = Field::prime(p).unwrap();
        let w = Weight::new(f, 0, 0).unwrap();
        for radius in 0..=3i64 {
            let mut seen = BTreeSet::from([TreeVertex::base(p)]);
            let mut queue = VecDeque::from([(TreeVertex::base(p), 0)]);
            while let Some((v, d)) = queue.pop_front() {
                if d == radius {
                    continue;
                }
                for n in v.neighbours() {
                    if seen.insert(n) {
                        queue.push_back((n, d + 1));
                    }
                }
            }
            let ball: BTreeSet<TreeVertex> = Ball::new(w, radius).vertices().iter().copied().collect();
            assert_eq!(ball, seen, "p = {p}, R = {radius}");
            let p = p as usize;
            let closed = if radius == 0 { 1 } else { 1 + (p + 1) * (p.pow(radius as u32) - 1) / (p - 1) };
            assert_eq!(ball.len(), closed);
        }
    }
}
