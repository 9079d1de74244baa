//! Sparse vectors and an incremental semi-echelon basis.
//!
//! Pivots are always the smallest nonzero column of a row, so reduction is a
//! single left-to-right sweep and normal forms are unique.

use std::collections::{BTreeMap, HashMap};

use super::{Field, FieldElem};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: Vec<(usize, FieldElem)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize, field: Field) -> Self {
        SparseVec { entries: vec![(index, field.one())] }
    }

    pub fn from_map(map: BTreeMap<usize, FieldElem>) -> Self {
        SparseVec { entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    /// Build from unsorted pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, FieldElem)>) -> Self {
        let mut map: BTreeMap<usize, FieldElem> = BTreeMap::new();
        for (i, v) in pairs {
            map.entry(i).and_modify(|e| *e += v).or_insert(v);
        }
        Self::from_map(map)
    }

    pub fn from_dense(v: &[FieldElem]) -> Self {
        SparseVec { entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, *x)).collect() }
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<FieldElem> {
        let mut out = vec![field.zero(); len];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, FieldElem)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, FieldElem)> {
        self.entries.first().copied()
    }

    pub fn get(&self, index: usize) -> Option<FieldElem> {
        self.entries.binary_search_by_key(&index, |e| e.0).ok().map(|pos| self.entries[pos].1)
    }

    pub fn scale(&self, c: FieldElem) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|&(i, v)| (i, v * c)).collect() }
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, other: &SparseVec, c: FieldElem) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ia, va)), Some(&&(ib, vb))) => {
                    if ia < ib {
                        out.push((ia, va));
                        a.next();
                    } else if ib < ia {
                        let w = vb * c;
                        if !w.is_zero() {
                            out.push((ib, w));
                        }
                        b.next();
                    } else {
                        let w = va + vb * c;
                        if !w.is_zero() {
                            out.push((ia, w));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&(ia, va)), None) => {
                    out.push((ia, va));
                    a.next();
                }
                (None, Some(&&(ib, vb))) => {
                    let w = vb * c;
                    if !w.is_zero() {
                        out.push((ib, w));
                    }
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            Some(&(_, v)) => self.add_scaled(other, v.field().one()),
            None => self.clone(),
        }
    }

    pub fn dot(&self, dense: &[FieldElem]) -> Option<FieldElem> {
        let mut acc: Option<FieldElem> = None;
        for &(i, v) in &self.entries {
            let term = v * dense[i];
            acc = Some(match acc {
                Some(a) => a + term,
                None => term,
            });
        }
        acc
    }
}

/// Incremental semi-echelon basis of a subspace, optionally tracking how
/// each basis row is expressed in terms of the inserted generators.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    rows: Vec<SparseVec>,
    /// Row combination in terms of generator indices (when tracking).
    tags: Option<Vec<SparseVec>>,
    pivot_row: HashMap<usize, usize>,
    inserted: usize,
}

/// Result of a tracked reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub remainder: SparseVec,
    /// `original - remainder = Σ combination[i] · generator_i`.
    pub combination: SparseVec,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon { field, rows: Vec::new(), tags: None, pivot_row: HashMap::new(), inserted: 0 }
    }

    pub fn tracking(field: Field) -> Self {
        Echelon { tags: Some(Vec::new()), ..Echelon::new(field) }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn generators_inserted(&self) -> usize {
        self.inserted
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    fn sweep(&self, v: &SparseVec, mut combo: Option<SparseVec>) -> (SparseVec, Option<SparseVec>) {
        let mut work: BTreeMap<usize, FieldElem> = v.entries().iter().copied().collect();
        let mut out = Vec::new();
        while let Some((col, val)) = work.pop_first() {
            match self.pivot_row.get(&col) {
                None => out.push((col, val)),
                Some(&r) => {
                    for &(c, x) in &self.rows[r].entries[1..] {
                        let delta = x * val;
                        match work.entry(c) {
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                let nv = *e.get() - delta;
                                if nv.is_zero() {
                                    e.remove();
                                } else {
                                    *e.get_mut() = nv;
                                }
                            }
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(-delta);
                            }
                        }
                    }
                    if let (Some(acc), Some(tags)) = (combo.as_mut(), self.tags.as_ref()) {
                        *acc = acc.add_scaled(&tags[r], val);
                    }
                }
            }
        }
        (SparseVec { entries: out }, combo)
    }

    /// Unique normal form of `v` modulo the span (supported on non-pivot columns).
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.sweep(v, None).0
    }

    /// Like [`reduce`](Self::reduce), also returning the combination of
    /// generators that was subtracted. Requires a tracking basis.
    pub fn reduce_tracked(&self, v: &SparseVec) -> Reduction {
        assert!(self.tags.is_some(), "reduce_tracked needs a tracking basis");
        let (remainder, combo) = self.sweep(v, Some(SparseVec::new()));
        Reduction { remainder, combination: combo.unwrap() }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert generator number `generators_inserted()`; returns whether the
    /// span grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let start = self.tags.as_ref().map(|_| SparseVec::unit(index, self.field));
        let (rem, combo) = self.sweep(v, start.clone().map(|_| SparseVec::new()));
        let Some((col, lead)) = rem.leading() else {
            return false;
        };
        let inv = lead.inv();
        self.pivot_row.insert(col, self.rows.len());
        self.rows.push(rem.scale(inv));
        if let (Some(tags), Some(start), Some(combo)) = (self.tags.as_mut(), start, combo) {
            // rem = v - Σ combo_i gen_i  =>  tag = (e_index - combo) / lead
            let tag = start.add_scaled(&combo, -self.field.one());
            tags.push(tag.scale(inv));
        }
        true
    }
}

/// Basis of the relations `Σ x_j · columns[j] = 0`, as sparse vectors indexed
/// by column.
pub fn column_kernel(field: Field, columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech = Echelon::tracking(field);
    let mut kernel = Vec::new();
    for (j, c) in columns.iter().enumerate() {
        let red = ech.reduce_tracked(c);
        if red.remainder.is_zero() {
            kernel.push(SparseVec::unit(j, field).add_scaled(&red.combination, -field.one()));
        }
        ech.insert(c);
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_and_track() {
        let f = Field::prime(3).unwrap();
        let e = |pairs: &[(usize, i64)]| SparseVec::from_pairs(pairs.iter().map(|&(i, x)| (i, f.from_int(x))));
        let mut ech = Echelon::tracking(f);
        assert!(ech.insert(&e(&[(0, 1), (2, 1)])));
        assert!(ech.insert(&e(&[(0, 1), (1, 1)])));
        assert!(!ech.insert(&e(&[(1, 2), (2, 1)])), "difference of the first two");
        let target = e(&[(0, 2), (1, 1), (2, 1)]);
        let red = ech.reduce_tracked(&target);
        assert!(red.remainder.is_zero());
        // rebuild from generators
        let gens = [e(&[(0, 1), (2, 1)]), e(&[(0, 1), (1, 1)])];
        let mut rebuilt = SparseVec::new();
        for &(i, c) in red.combination.entries() {
            rebuilt = rebuilt.add_scaled(&gens[i], c);
        }
        assert_eq!(rebuilt, target);
    }

    #[test]
    fn column_kernel_relations() {
        let f = Field::prime(3).unwrap();
        let e = |pairs: &[(usize, i64)]| SparseVec::from_pairs(pairs.iter().map(|&(i, x)| (i, f.from_int(x))));
        let cols = [e(&[(0, 1)]), e(&[(0, 2)]), e(&[(1, 1)]), e(&[(0, 1), (1, 1)])];
        let kernel = column_kernel(f, &cols);
        assert_eq!(kernel.len(), 2);
        for k in &kernel {
            let mut total = SparseVec::new();
            for &(j, x) in k.entries() {
                total = total.add_scaled(&cols[j], x);
            }
            assert!(total.is_zero());
        }
    }

    #[test]
    fn normal_form_is_unique() {
        let f = Field::prime(5).unwrap();
        let e = |pairs: &[(usize, i64)]| SparseVec::from_pairs(pairs.iter().map(|&(i, x)| (i, f.from_int(x))));
        let mut ech = Echelon::new(f);
        ech.insert(&e(&[(1, 1), (3, 2)]));
        ech.insert(&e(&[(0, 3), (1, 1)]));
        let a = e(&[(0, 1), (2, 4)]);
        let b = a.add_scaled(&e(&[(1, 1), (3, 2)]), f.from_int(3)).add_scaled(&e(&[(0, 3), (1, 1)]), f.from_int(2));
        assert_eq!(ech.reduce(&a), ech.reduce(&b));
    }
}
