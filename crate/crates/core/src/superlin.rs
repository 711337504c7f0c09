//! Exact sparse super linear algebra.

use std::collections::{btree_map, BTreeMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SuperlinError {
    #[error("signature mismatch: {0}")]
    Signature(String),
}

/// An ordered tensor product of finite super vector spaces, each factor
/// described by its list of (basis label, parity) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceSignature {
    factors: Vec<Vec<(String, u8)>>,
}

impl SpaceSignature {
    pub fn new(factors: Vec<Vec<(String, u8)>>) -> SpaceSignature {
        for factor in &factors {
            let mut labels: Vec<&String> = factor.iter().map(|(l, _)| l).collect();
            labels.sort();
            labels.dedup();
            assert_eq!(labels.len(), factor.len(), "duplicate basis label in factor");
        }
        SpaceSignature { factors }
    }

    /// The empty tensor product: the scalars.
    pub fn scalar() -> SpaceSignature {
        SpaceSignature { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[Vec<(String, u8)>] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.len()).product()
    }

    pub fn label(&self, factor: usize, idx: u32) -> &str {
        &self.factors[factor][idx as usize].0
    }

    pub fn label_parity(&self, factor: usize, idx: u32) -> u8 {
        self.factors[factor][idx as usize].1
    }

    pub fn label_index(&self, factor: usize, label: &str) -> Option<u32> {
        self.factors[factor].iter().position(|(l, _)| l == label).map(|i| i as u32)
    }

    pub fn parity_of(&self, tuple: &[u32]) -> u8 {
        assert_eq!(tuple.len(), self.factors.len(), "tuple length mismatch");
        tuple
            .iter()
            .enumerate()
            .map(|(i, &x)| self.label_parity(i, x) as u32)
            .sum::<u32>() as u8
            % 2
    }

    /// The signature with factors position..position+removed replaced by
    /// the factors of `insert`.
    pub fn splice(&self, position: usize, removed: usize, insert: &SpaceSignature) -> SpaceSignature {
        let mut factors = self.factors[..position].to_vec();
        factors.extend(insert.factors.iter().cloned());
        factors.extend(self.factors[position + removed..].iter().cloned());
        SpaceSignature { factors }
    }

    /// All basis tuples in lexicographic order of factor indices.
    pub fn all_tuples(&self) -> Vec<Vec<u32>> {
        let mut tuples = vec![Vec::new()];
        for factor in &self.factors {
            let mut next = Vec::with_capacity(tuples.len() * factor.len());
            for t in &tuples {
                for i in 0..factor.len() as u32 {
                    let mut t2 = t.clone();
                    t2.push(i);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        tuples
    }

    pub fn tuple_display(&self, tuple: &[u32]) -> String {
        if tuple.is_empty() {
            return "1".to_string();
        }
        tuple
            .iter()
            .enumerate()
            .map(|(i, &x)| self.label(i, x).to_string())
            .collect::<Vec<_>>()
            .join("(x)")
    }
}

/// A sparse vector in the tensor space described by its signature.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperVector {
    sig: SpaceSignature,
    entries: BTreeMap<Vec<u32>, BigRational>,
}

impl SuperVector {
    pub fn zero(sig: SpaceSignature) -> SuperVector {
        SuperVector { sig, entries: BTreeMap::new() }
    }

    pub fn basis(sig: SpaceSignature, tuple: Vec<u32>) -> SuperVector {
        let mut v = SuperVector::zero(sig);
        v.add_entry(tuple, BigRational::one());
        v
    }

    pub fn sig(&self) -> &SpaceSignature {
        &self.sig
    }

    pub fn entries(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.entries
    }

    pub fn get(&self, tuple: &[u32]) -> BigRational {
        self.entries.get(tuple).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, tuple: Vec<u32>, c: BigRational) {
        assert_eq!(tuple.len(), self.sig.num_factors(), "tuple length mismatch");
        if c.is_zero() {
            return;
        }
        match self.entries.entry(tuple) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SuperVector, c: &BigRational) {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        for (t, x) in &other.entries {
            self.add_entry(t.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &BigRational) -> SuperVector {
        let mut out = SuperVector::zero(self.sig.clone());
        out.add_scaled(self, c);
        out
    }

    /// The common parity of all present basis tuples, if homogeneous.
    pub fn parity(&self) -> Option<u8> {
        let mut parity = None;
        for t in self.entries.keys() {
            let p = self.sig.parity_of(t);
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        parity
    }
}

impl fmt::Display for SuperVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}", self.sig.tuple_display(t))?;
        }
        Ok(())
    }
}

/// A sparse homogeneous linear map between tensor spaces. Basis tuples
/// absent from the map are sent to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    source: SpaceSignature,
    target: SpaceSignature,
    parity: u8,
    map: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, BigRational>>,
}

impl SuperOperator {
    pub fn new(source: SpaceSignature, target: SpaceSignature, parity: u8) -> SuperOperator {
        SuperOperator { source, target, parity, map: BTreeMap::new() }
    }

    pub fn identity(sig: SpaceSignature) -> SuperOperator {
        let mut op = SuperOperator::new(sig.clone(), sig.clone(), 0);
        for t in sig.all_tuples() {
            op.add_entry(t.clone(), t, BigRational::one());
        }
        op
    }

    pub fn source(&self) -> &SpaceSignature {
        &self.source
    }

    pub fn target(&self) -> &SpaceSignature {
        &self.target
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn entries(
        &self,
    ) -> impl Iterator<Item = (&Vec<u32>, &BTreeMap<Vec<u32>, BigRational>)> {
        self.map.iter()
    }

    pub fn add_entry(&mut self, input: Vec<u32>, output: Vec<u32>, c: BigRational) {
        assert_eq!(input.len(), self.source.num_factors(), "input tuple length");
        assert_eq!(output.len(), self.target.num_factors(), "output tuple length");
        if c.is_zero() {
            return;
        }
        let row = self.map.entry(input.clone()).or_default();
        match row.entry(output) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
        if row.is_empty() {
            self.map.remove(&input);
        }
    }

    pub fn apply(&self, v: &SuperVector) -> SuperVector {
        assert_eq!(self.source, *v.sig(), "operator applied to wrong space");
        let mut out = SuperVector::zero(self.target.clone());
        for (t, c) in v.entries() {
            if let Some(row) = self.map.get(t) {
                for (u, x) in row {
                    out.add_entry(u.clone(), x * c);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> SuperOperator {
        let mut out = SuperOperator::new(self.source.clone(), self.target.clone(), self.parity);
        for (t, row) in &self.map {
            for (u, x) in row {
                out.add_entry(t.clone(), u.clone(), x * c);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }
}

/// Sum of two operators on the same spaces with the same parity.
pub fn op_add(f: &SuperOperator, g: &SuperOperator) -> Result<SuperOperator, SuperlinError> {
    if f.source != g.source || f.target != g.target || f.parity != g.parity {
        return Err(SuperlinError::Signature(
            "operator sum requires equal signatures and parity".to_string(),
        ));
    }
    let mut out = f.clone();
    for (t, row) in &g.map {
        for (u, x) in row {
            out.add_entry(t.clone(), u.clone(), x.clone());
        }
    }
    Ok(out)
}

/// Composition f after g.
pub fn op_compose(f: &SuperOperator, g: &SuperOperator) -> Result<SuperOperator, SuperlinError> {
    if f.source != g.target {
        return Err(SuperlinError::Signature(
            "composition requires source(f) = target(g)".to_string(),
        ));
    }
    let mut out = SuperOperator::new(g.source.clone(), f.target.clone(), (f.parity + g.parity) % 2);
    for (t, row) in &g.map {
        for (u, c) in row {
            if let Some(frow) = f.map.get(u) {
                for (w, x) in frow {
                    out.add_entry(t.clone(), w.clone(), x * c);
                }
            }
        }
    }
    Ok(out)
}

/// The operator 1 ⊗ ... ⊗ local ⊗ ... ⊗ 1 acting at the given factor
/// position of the ambient space, with the Koszul sign from moving the
/// (possibly odd) local operator past the factors to its left.
pub fn apply_at(
    local: &SuperOperator,
    position: usize,
    sig: &SpaceSignature,
) -> Result<SuperOperator, SuperlinError> {
    let j = local.source.num_factors();
    if position + j > sig.num_factors()
        || sig.factors()[position..position + j] != local.source.factors()[..]
    {
        return Err(SuperlinError::Signature(format!(
            "local operator does not match factors {position}..{} of the ambient space",
            position + j
        )));
    }
    let target = sig.splice(position, j, &local.target);
    let mut out = SuperOperator::new(sig.clone(), target, local.parity);
    let prefix_sig = SpaceSignature::new(sig.factors()[..position].to_vec());
    let suffix_sig = SpaceSignature::new(sig.factors()[position + j..].to_vec());
    let prefixes = prefix_sig.all_tuples();
    let suffixes = suffix_sig.all_tuples();
    for (mid, row) in &local.map {
        for prefix in &prefixes {
            let sign = if local.parity == 1 && prefix_sig.parity_of(prefix) == 1 {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            for suffix in &suffixes {
                for (mid_out, c) in row {
                    let mut input = prefix.clone();
                    input.extend_from_slice(mid);
                    input.extend_from_slice(suffix);
                    let mut output = prefix.clone();
                    output.extend_from_slice(mid_out);
                    output.extend_from_slice(suffix);
                    out.add_entry(input, output, c * &sign);
                }
            }
        }
    }
    Ok(out)
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in row {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    row.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect()
}

/// Fraction-free echelon form: returns the eliminated integer rows and the
/// pivot columns in increasing order.
fn echelon(rows: Vec<Vec<BigRational>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r2 in row + 1..nrows {
            for c2 in col + 1..ncols {
                let num = &m[row][col] * &m[r2][c2] - &m[r2][col] * &m[row][c2];
                m[r2][c2] = num / &prev;
            }
            m[r2][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    m.truncate(pivots.len());
    (m, pivots)
}

/// Exact rank of a sparse rational matrix given as rows keyed by column.
pub fn rank_sparse(rows: &[BTreeMap<usize, BigRational>]) -> usize {
    let mut cols: Vec<usize> = rows.iter().flat_map(|r| r.keys().copied()).collect();
    cols.sort();
    cols.dedup();
    let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![BigRational::zero(); cols.len()];
            for (c, x) in r {
                row[col_pos[c]] = x.clone();
            }
            row
        })
        .collect();
    echelon(dense, cols.len()).1.len()
}

/// Deterministic exact basis of {x : M x = 0} for the sparse rational
/// matrix with the given number of columns: one basis vector per free
/// column in increasing order, normalized to 1 at its free column.
pub fn nullspace_sparse(
    rows: &[BTreeMap<usize, BigRational>],
    ncols: usize,
) -> Vec<Vec<BigRational>> {
    let dense: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![BigRational::zero(); ncols];
            for (c, x) in r {
                assert!(*c < ncols, "column index out of range");
                row[*c] = x.clone();
            }
            row
        })
        .collect();
    let (m, pivots) = echelon(dense, ncols);
    let pivot_set: Vec<bool> = {
        let mut set = vec![false; ncols];
        for &p in &pivots {
            set[p] = true;
        }
        set
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set[free] {
            continue;
        }
        let mut x = vec![BigRational::zero(); ncols];
        x[free] = BigRational::one();
        for i in (0..pivots.len()).rev() {
            let p = pivots[i];
            let mut acc = BigRational::zero();
            for c in p + 1..ncols {
                if !x[c].is_zero() && !m[i][c].is_zero() {
                    acc += BigRational::from_integer(m[i][c].clone()) * &x[c];
                }
            }
            x[p] = -acc / BigRational::from_integer(m[i][p].clone());
        }
        basis.push(x);
    }
    basis
}

/// As nullspace_sparse, but with the elimination kept sparse throughout and
/// the kernel returned as sparse vectors: one per free column in increasing
/// order, normalized to 1 at its free column. Produces the same basis as
/// nullspace_sparse; suitable for large systems with sparse rows.
pub fn kernel_sparse(
    rows: &[BTreeMap<usize, BigRational>],
    ncols: usize,
) -> Vec<BTreeMap<usize, BigRational>> {
    fn axpy(
        dst: &mut BTreeMap<usize, BigRational>,
        c: &BigRational,
        src: &BTreeMap<usize, BigRational>,
    ) {
        for (col, x) in src {
            let v = dst.entry(*col).or_insert_with(BigRational::zero);
            *v -= c * x;
            if v.is_zero() {
                dst.remove(col);
            }
        }
    }

    let mut rref: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
    for r in rows {
        let mut cur: BTreeMap<usize, BigRational> =
            r.iter().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (*c, x.clone())).collect();
        if let Some((&c, _)) = cur.iter().next_back() {
            assert!(c < ncols, "column index out of range");
        }
        loop {
            let hit: Vec<usize> = cur.keys().copied().filter(|c| rref.contains_key(c)).collect();
            if hit.is_empty() {
                break;
            }
            for c in hit {
                if let Some(coeff) = cur.get(&c).cloned() {
                    axpy(&mut cur, &coeff, &rref[&c]);
                }
            }
        }
        if cur.is_empty() {
            continue;
        }
        let (&lead, lc) = cur.iter().next().expect("nonempty row");
        let inv = lc.recip();
        let newrow: BTreeMap<usize, BigRational> =
            cur.iter().map(|(c, x)| (*c, x * &inv)).collect();
        let stale: Vec<usize> =
            rref.iter().filter(|(_, row)| row.contains_key(&lead)).map(|(p, _)| *p).collect();
        for p in stale {
            let c = rref[&p][&lead].clone();
            axpy(rref.get_mut(&p).expect("pivot row exists"), &c, &newrow);
        }
        rref.insert(lead, newrow);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if rref.contains_key(&free) {
            continue;
        }
        let mut x = BTreeMap::new();
        x.insert(free, BigRational::one());
        for (&p, row) in &rref {
            if let Some(c) = row.get(&free) {
                x.insert(p, -c.clone());
            }
        }
        basis.push(x);
    }
    basis
}

/// Exact rank of a family of vectors sharing a signature.
pub fn rank(vectors: &[SuperVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let sig = vectors[0].sig().clone();
    let mut cols: Vec<Vec<u32>> = Vec::new();
    for v in vectors {
        assert_eq!(*v.sig(), sig, "signature mismatch");
        cols.extend(v.entries().keys().cloned());
    }
    cols.sort();
    cols.dedup();
    let col_pos: BTreeMap<&Vec<u32>, usize> =
        cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let rows: Vec<BTreeMap<usize, BigRational>> = vectors
        .iter()
        .map(|v| v.entries().iter().map(|(t, c)| (col_pos[t], c.clone())).collect())
        .collect();
    rank_sparse(&rows)
}

/// Exact basis of the solution space of the homogeneous system whose rows
/// are the given vectors; solutions live in the same tensor space, with
/// one coordinate per basis tuple of the signature.
pub fn nullspace(rows: &[SuperVector]) -> Vec<SuperVector> {
    assert!(!rows.is_empty(), "nullspace needs at least one row to fix the space");
    let sig = rows[0].sig().clone();
    let tuples = sig.all_tuples();
    let col_pos: BTreeMap<&Vec<u32>, usize> =
        tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let sparse: Vec<BTreeMap<usize, BigRational>> = rows
        .iter()
        .map(|v| {
            assert_eq!(*v.sig(), sig, "signature mismatch");
            v.entries().iter().map(|(t, c)| (col_pos[t], c.clone())).collect()
        })
        .collect();
    nullspace_sparse(&sparse, tuples.len())
        .into_iter()
        .map(|x| {
            let mut v = SuperVector::zero(sig.clone());
            for (i, c) in x.into_iter().enumerate() {
                v.add_entry(tuples[i].clone(), c);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// The superspace C^{1|1} with labels v1 (even) and v1' (odd).
    fn v_space() -> SpaceSignature {
        SpaceSignature::new(vec![vec![("v1".to_string(), 0), ("v1'".to_string(), 1)]])
    }

    fn tensor_power(sig: &SpaceSignature, k: usize) -> SpaceSignature {
        let mut factors = Vec::new();
        for _ in 0..k {
            factors.extend(sig.factors().to_vec());
        }
        SpaceSignature::new(factors)
    }

    /// The odd evaluation form on V⊗V pairing v_i with v_{i'} symmetrically.
    fn beta() -> SuperOperator {
        let vv = tensor_power(&v_space(), 2);
        let mut op = SuperOperator::new(vv, SpaceSignature::scalar(), 1);
        op.add_entry(vec![0, 1], vec![], rat(1));
        op.add_entry(vec![1, 0], vec![], rat(1));
        op
    }

    /// The odd coevaluation sending 1 to v1⊗v1' − v1'⊗v1.
    fn beta_star() -> SuperOperator {
        let vv = tensor_power(&v_space(), 2);
        let mut op = SuperOperator::new(SpaceSignature::scalar(), vv, 1);
        op.add_entry(vec![], vec![0, 1], rat(1));
        op.add_entry(vec![], vec![1, 0], rat(-1));
        op
    }

    /// The signed swap on V⊗V.
    fn sigma() -> SuperOperator {
        let vv = tensor_power(&v_space(), 2);
        let mut op = SuperOperator::new(vv.clone(), vv.clone(), 0);
        for a in 0..2u32 {
            for b in 0..2u32 {
                let sign = if a == 1 && b == 1 { rat(-1) } else { rat(1) };
                op.add_entry(vec![a, b], vec![b, a], sign);
            }
        }
        op
    }

    #[test]
    fn koszul_sign_of_odd_local_operators() {
        let v3 = tensor_power(&v_space(), 3);
        let op = apply_at(&beta(), 1, &v3).unwrap();
        let input = SuperVector::basis(v3.clone(), vec![1, 0, 1]);
        let out = op.apply(&input);
        let expected = SuperVector::basis(v_space(), vec![1]).scale(&rat(-1));
        assert_eq!(out, expected);

        let vv = tensor_power(&v_space(), 2);
        let op = apply_at(&beta(), 0, &vv).unwrap();
        let out = op.apply(&SuperVector::basis(vv.clone(), vec![0, 1]));
        assert_eq!(out, SuperVector::basis(SpaceSignature::scalar(), vec![]));

        assert!(apply_at(&beta(), 2, &v3).is_err());
    }

    #[test]
    fn composition_and_identities() {
        let vv = tensor_power(&v_space(), 2);
        let id = SuperOperator::identity(vv.clone());
        assert_eq!(op_compose(&id, &id).unwrap(), id);
        assert_eq!(op_compose(&sigma(), &sigma()).unwrap(), id);
        let loop_val = op_compose(&beta(), &beta_star()).unwrap();
        assert!(loop_val.is_zero());
    }

    #[test]
    fn disjoint_odd_operators_anticommute() {
        let v4 = tensor_power(&v_space(), 4);
        let vv = tensor_power(&v_space(), 2);
        let right_first = op_compose(
            &apply_at(&beta(), 0, &vv).unwrap(),
            &apply_at(&beta(), 2, &v4).unwrap(),
        )
        .unwrap();
        let left_first = op_compose(
            &apply_at(&beta(), 0, &vv).unwrap(),
            &apply_at(&beta(), 0, &v4).unwrap(),
        )
        .unwrap();
        assert_eq!(right_first, left_first.scale(&rat(-1)));
    }

    #[test]
    fn operators_preserve_declared_parity() {
        let v3 = tensor_power(&v_space(), 3);
        let op = apply_at(&beta(), 1, &v3).unwrap();
        for t in v3.all_tuples() {
            let out = op.apply(&SuperVector::basis(v3.clone(), t.clone()));
            if let Some(p) = out.parity() {
                assert_eq!(p, (v3.parity_of(&t) + op.parity()) % 2);
            }
        }
    }

    #[test]
    fn rank_of_simple_families() {
        assert_eq!(rank(&[]), 0);
        let vv = tensor_power(&v_space(), 2);
        let e = SuperVector::basis(vv.clone(), vec![0, 1]);
        assert_eq!(rank(&[e.clone(), e.clone()]), 1);
        let mut f = SuperVector::basis(vv.clone(), vec![1, 0]);
        f.add_scaled(&e, &rat(3));
        assert_eq!(rank(&[e.clone(), f.clone()]), 2);
        assert_eq!(rank(&[e.clone(), f.clone(), e.scale(&rat(-7))]), 2);
    }

    #[test]
    fn nullspace_of_simple_systems() {
        let vv = tensor_power(&v_space(), 2);
        let mut rows = Vec::new();
        for t in vv.all_tuples() {
            rows.push(SuperVector::basis(vv.clone(), t));
        }
        assert!(nullspace(&rows).is_empty());

        let zero_row = SuperVector::zero(v_space());
        let sols = nullspace(&[zero_row]);
        assert_eq!(sols.len(), 2);

        let mut row = SuperVector::basis(v_space(), vec![0]);
        row.add_entry(vec![1], rat(1));
        let sols = nullspace(&[row.clone()]);
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].get(&[1]), rat(1));
        assert_eq!(sols[0].get(&[0]), rat(-1));
    }

    #[test]
    fn rank_plus_transposed_nullity_is_vector_count() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        for _ in 0..30 {
            let nrows = rng.gen_range(1..=6usize);
            let ncols = rng.gen_range(1..=6usize);
            let mut rows: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); nrows];
            let mut transpose: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); ncols];
            for (r, row) in rows.iter_mut().enumerate() {
                for c in 0..ncols {
                    if rng.gen_bool(0.4) {
                        let x = rat(rng.gen_range(-4..=4i64));
                        if !x.is_zero() {
                            row.insert(c, x.clone());
                            transpose[c].insert(r, x);
                        }
                    }
                }
            }
            let r = rank_sparse(&rows);
            let null_t = nullspace_sparse(&transpose, nrows);
            assert_eq!(r + null_t.len(), nrows);

            let null = nullspace_sparse(&rows, ncols);
            assert_eq!(r + null.len(), ncols);
            for x in &null {
                for row in &rows {
                    let mut acc = BigRational::zero();
                    for (c, v) in row {
                        acc += v * &x[*c];
                    }
                    assert!(acc.is_zero(), "returned vector not in the nullspace");
                }
            }
        }
    }

    #[test]
    fn sparse_kernel_matches_the_dense_elimination() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0004);
        for _ in 0..40 {
            let nrows = rng.gen_range(1..=7usize);
            let ncols = rng.gen_range(1..=8usize);
            let mut rows: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); nrows];
            for row in rows.iter_mut() {
                for c in 0..ncols {
                    if rng.gen_bool(0.45) {
                        let x = rat(rng.gen_range(-4..=4i64));
                        if !x.is_zero() {
                            row.insert(c, x);
                        }
                    }
                }
            }
            let dense = nullspace_sparse(&rows, ncols);
            let sparse = kernel_sparse(&rows, ncols);
            assert_eq!(sparse.len(), dense.len());
            for (s, d) in sparse.iter().zip(&dense) {
                let mut densified = vec![BigRational::zero(); ncols];
                for (c, x) in s {
                    densified[*c] = x.clone();
                }
                assert_eq!(&densified, d);
            }
            for x in &sparse {
                for row in &rows {
                    let mut acc = BigRational::zero();
                    for (c, v) in row {
                        if let Some(xc) = x.get(c) {
                            acc += v * xc;
                        }
                    }
                    assert!(acc.is_zero(), "returned vector not in the kernel");
                }
            }
        }
    }
}
