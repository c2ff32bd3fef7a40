//! Vector bundles and torsion-free sheaves on a chain of projective lines.
//!
//! Component `i` carries `⊕_j O(d_ij)`; node `p_i` joins components `i` and
//! `i+1` and is described by `M'_i` (rows of component `i`) and `M''_i` (rows
//! of component `i+1`), whose columns span the fibre of the sheaf at `p_i`.
//!
//! Allowed changes: arbitrary column operations at a node, and row operations
//! on a component coming from its automorphisms: row `k` may be added to row
//! `j` when `d_k ≤ d_j`, independently at the two ends of the component when
//! `d_k < d_j` and with the same coefficient at both ends when `d_k = d_j`.
//!
//! The reduction walks the nodes from left to right. Every row of the current
//! component belongs to a *strand* (a line bundle on an interval of
//! components seen so far), and the row operations that survive on already
//! reduced nodes are governed by a total preorder on strands: the reversed
//! degree history followed by a marker for how the strand started.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{json_usize, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainData {
    pub field: Field,
    pub s: usize,
    pub ranks: Vec<usize>,
    pub node_dims: Vec<usize>,
    pub weights: Vec<Vec<i64>>,
    pub m_prime: Vec<Matrix>,
    pub m_dblprime: Vec<Matrix>,
}

/// A line bundle supported on components `start..=end` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalLineBundle {
    pub start: usize,
    pub end: usize,
    pub degrees: Vec<i64>,
}

impl IntervalLineBundle {
    pub fn to_json(&self) -> Value {
        json!({ "start": self.start, "end": self.end, "degrees": self.degrees })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReduction {
    pub transformed: ChainData,
    /// Vector-degrees of the line-bundle summands, sorted.
    pub bundles: Vec<Vec<i64>>,
}

impl ChainData {
    /// Data with identity gluings for the given per-component weights.
    pub fn identity(field: Field, weights: Vec<Vec<i64>>) -> Result<ChainData> {
        let s = weights.len();
        let r = weights.first().map_or(0, Vec::len);
        if s == 0 || weights.iter().any(|w| w.len() != r) {
            return Err(Error::RankMismatch("identity chain data needs equal ranks".into()));
        }
        Ok(ChainData {
            field,
            s,
            ranks: vec![r; s],
            node_dims: vec![r; s - 1],
            weights,
            m_prime: vec![Matrix::identity(field, r); s - 1],
            m_dblprime: vec![Matrix::identity(field, r); s - 1],
        })
    }

    /// Checks that all counts and matrix shapes are consistent.
    pub fn validate_shapes(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::SizeMismatch("a chain needs at least one component".into()));
        }
        if self.ranks.len() != self.s || self.weights.len() != self.s {
            return Err(Error::SizeMismatch(format!("expected {} ranks and weight lists", self.s)));
        }
        let nodes = self.s - 1;
        if self.node_dims.len() != nodes || self.m_prime.len() != nodes || self.m_dblprime.len() != nodes {
            return Err(Error::SizeMismatch(format!("expected {nodes} node dimensions and matrix pairs")));
        }
        for (i, w) in self.weights.iter().enumerate() {
            if w.len() != self.ranks[i] {
                return Err(Error::SizeMismatch(format!("component {} has rank {} but {} weights", i + 1, self.ranks[i], w.len())));
            }
        }
        for i in 0..nodes {
            let (mp, mpp) = (&self.m_prime[i], &self.m_dblprime[i]);
            if mp.rows() != self.ranks[i] || mp.cols() != self.node_dims[i] {
                return Err(Error::SizeMismatch(format!(
                    "M'_{} is {}x{}, expected {}x{}",
                    i + 1,
                    mp.rows(),
                    mp.cols(),
                    self.ranks[i],
                    self.node_dims[i]
                )));
            }
            if mpp.rows() != self.ranks[i + 1] || mpp.cols() != self.node_dims[i] {
                return Err(Error::SizeMismatch(format!(
                    "M''_{} is {}x{}, expected {}x{}",
                    i + 1,
                    mpp.rows(),
                    mpp.cols(),
                    self.ranks[i + 1],
                    self.node_dims[i]
                )));
            }
            if mp.field() != self.field || mpp.field() != self.field {
                return Err(Error::SizeMismatch("matrices over different fields".into()));
            }
        }
        Ok(())
    }

    /// Vector-bundle conditions: equal ranks and node dimensions, invertible
    /// node matrices.
    pub fn validate_vector_bundle(&self) -> Result<()> {
        self.validate_shapes()?;
        let r = self.ranks[0];
        if self.ranks.iter().any(|&x| x != r) || self.node_dims.iter().any(|&x| x != r) {
            return Err(Error::RankMismatch(format!("ranks {:?} and node dimensions {:?} must all agree", self.ranks, self.node_dims)));
        }
        for i in 0..self.s - 1 {
            if !self.m_prime[i].is_invertible() {
                return Err(Error::NotInvertible(format!("M'_{} is singular", i + 1)));
            }
            if !self.m_dblprime[i].is_invertible() {
                return Err(Error::NotInvertible(format!("M''_{} is singular", i + 1)));
            }
        }
        Ok(())
    }

    /// Torsion-free conditions. Only injectivity of the stacked node map is
    /// required; rows of `M'_i` or `M''_i` that end up zero are read as
    /// summands left unglued at that node.
    pub fn validate_torsion_free(&self) -> Result<()> {
        self.validate_shapes()?;
        for i in 0..self.s - 1 {
            let stacked = self.m_prime[i].vstack(&self.m_dblprime[i]);
            if stacked.rank() != self.node_dims[i] {
                return Err(Error::RankConditionViolated(format!(
                    "stacked matrix at node {} has rank {} < {}",
                    i + 1,
                    stacked.rank(),
                    self.node_dims[i]
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s,
            "ranks": self.ranks,
            "node_dims": self.node_dims,
            "weights": self.weights,
            "M_prime": self.m_prime.iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "M_dblprime": self.m_dblprime.iter().map(Matrix::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(field: Field, v: &Value) -> Result<ChainData> {
        let s = json_usize(v, "s")?;
        let usize_list = |key: &str| -> Result<Vec<usize>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing `{key}`")))?
                .iter()
                .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("bad entry in `{key}`"))))
                .collect()
        };
        let ranks = usize_list("ranks")?;
        let node_dims = usize_list("node_dims")?;
        let weights = v
            .get("weights")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `weights`".into()))?
            .iter()
            .map(|w| {
                w.as_array()
                    .ok_or_else(|| Error::Parse("weights must be lists".into()))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| Error::Parse("weights must be integers".into())))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mats = |key: &str| -> Result<Vec<Matrix>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing `{key}`")))?
                .iter()
                .map(|m| Matrix::from_json(field, m))
                .collect()
        };
        let data = ChainData { field, s, ranks, node_dims, weights, m_prime: mats("M_prime")?, m_dblprime: mats("M_dblprime")? };
        data.validate_shapes()?;
        Ok(data)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum KeyItem {
    Low,
    Deg(i64),
    High,
}

#[derive(Clone, Debug)]
struct Strand {
    start: usize,
    degrees: Vec<i64>,
    /// `High` when the strand starts on the first component or from a fibre
    /// direction invisible on the left; `Low` when its row was unglued on the
    /// left.
    marker: KeyItem,
}

impl Strand {
    fn key(&self) -> Vec<KeyItem> {
        let mut k: Vec<KeyItem> = self.degrees.iter().rev().map(|&d| KeyItem::Deg(d)).collect();
        k.push(self.marker.clone());
        k
    }

    fn into_interval(self) -> IntervalLineBundle {
        let end = self.start + self.degrees.len();
        IntervalLineBundle { start: self.start + 1, end, degrees: self.degrees }
    }
}

/// Row operations on the rows of `M''_i` (component `i+1`) between rows of
/// equal weight act on `M'_{i+1}` as well.
struct RightRows<'a> {
    mpp: &'a mut Matrix,
    next: Option<&'a mut Matrix>,
    weights: &'a [i64],
}

impl RightRows<'_> {
    fn add_row(&mut self, dst: usize, src: usize, c: &crate::field::FieldElem) {
        debug_assert!(self.weights[src] <= self.weights[dst]);
        self.mpp.add_row_multiple(dst, src, c);
        if self.weights[src] == self.weights[dst] {
            if let Some(n) = self.next.as_deref_mut() {
                n.add_row_multiple(dst, src, c);
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: &crate::field::FieldElem) {
        self.mpp.scale_row(i, c);
        if let Some(n) = self.next.as_deref_mut() {
            n.scale_row(i, c);
        }
    }
}

/// Runs the reduction and returns the strands together with the reduced node
/// matrices.
fn reduce_strands(data: &ChainData) -> (Vec<Strand>, Vec<Matrix>, Vec<Matrix>) {
    let mut finished = Vec::new();
    let mut active: Vec<Strand> =
        data.weights[0].iter().map(|&d| Strand { start: 0, degrees: vec![d], marker: KeyItem::High }).collect();
    let mut reduced_p = Vec::new();
    let mut reduced_pp = Vec::new();
    let mut carry = data.m_prime.first().cloned();

    for i in 0..data.s - 1 {
        let mut mp = carry.take().expect("carried M'");
        let mut mpp = data.m_dblprime[i].clone();
        let mut next = data.m_prime.get(i + 1).cloned();
        let w = &data.weights[i + 1];
        let keys: Vec<Vec<KeyItem>> = active.iter().map(Strand::key).collect();
        let (r, rr, m) = (mp.rows(), mpp.rows(), mp.cols());

        // Reduce M' to a partial permutation.
        let mut row_pivot: Vec<Option<usize>> = vec![None; r];
        let mut col_owner: Vec<Option<usize>> = vec![None; m];
        loop {
            let cand = (0..r)
                .filter(|&j| row_pivot[j].is_none() && mp.row(j).iter().any(|x| !x.is_zero()))
                .min_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
            let Some(p) = cand else { break };
            let c = (0..m).find(|&c| !mp.get(p, c).is_zero()).unwrap();
            let inv = mp.get(p, c).inv().unwrap();
            mp.scale_col(c, &inv);
            mpp.scale_col(c, &inv);
            for b in 0..m {
                if b != c && !mp.get(p, b).is_zero() {
                    let x = -mp.get(p, b);
                    mp.add_col_multiple(b, c, &x);
                    mpp.add_col_multiple(b, c, &x);
                }
            }
            for j in 0..r {
                if j != p && !mp.get(j, c).is_zero() {
                    debug_assert!(keys[p] <= keys[j]);
                    let x = -mp.get(j, c);
                    mp.add_row_multiple(j, p, &x);
                }
            }
            row_pivot[p] = Some(c);
            col_owner[c] = Some(p);
        }

        let mut right = RightRows { mpp: &mut mpp, next: next.as_mut(), weights: w };

        // Columns invisible in M' are reduced inside M''.
        let kcols: Vec<usize> = (0..m).filter(|&c| col_owner[c].is_none()).collect();
        let mut k_used = vec![false; m];
        let mut k_row: Vec<Option<usize>> = vec![None; rr];
        loop {
            let cand = (0..rr)
                .filter(|&j| k_row[j].is_none() && kcols.iter().any(|&c| !k_used[c] && !right.mpp.get(j, c).is_zero()))
                .min_by(|&a, &b| w[a].cmp(&w[b]).then(a.cmp(&b)));
            let Some(p) = cand else { break };
            let c = *kcols.iter().find(|&&c| !k_used[c] && !right.mpp.get(p, c).is_zero()).unwrap();
            let inv = right.mpp.get(p, c).inv().unwrap();
            right.mpp.scale_col(c, &inv);
            for b in 0..m {
                if b != c && !right.mpp.get(p, b).is_zero() {
                    let x = -right.mpp.get(p, b);
                    right.mpp.add_col_multiple(b, c, &x);
                }
            }
            for j in 0..rr {
                if j != p && !right.mpp.get(j, c).is_zero() {
                    let x = -right.mpp.get(j, c);
                    right.add_row(j, p, &x);
                }
            }
            k_used[c] = true;
            k_row[p] = Some(c);
        }

        // Columns visible in M' against the remaining rows of M''. Adding
        // column b into column a is paid for by a row operation on M', so it
        // needs key(owner(b)) >= key(owner(a)).
        let qcols: Vec<usize> = (0..m).filter(|&c| col_owner[c].is_some()).collect();
        let mut q_row: Vec<Option<usize>> = vec![None; m];
        let mut r_used = vec![false; rr];
        loop {
            let free_rows: Vec<usize> = (0..rr).filter(|&j| k_row[j].is_none() && !r_used[j]).collect();
            let cand = qcols
                .iter()
                .copied()
                .filter(|&c| q_row[c].is_none() && free_rows.iter().any(|&j| !right.mpp.get(j, c).is_zero()))
                .max_by(|&a, &b| {
                    let (ka, kb) = (&keys[col_owner[a].unwrap()], &keys[col_owner[b].unwrap()]);
                    ka.cmp(kb).then(b.cmp(&a))
                });
            let Some(q) = cand else { break };
            let p = free_rows
                .iter()
                .copied()
                .filter(|&j| !right.mpp.get(j, q).is_zero())
                .min_by(|&a, &b| w[a].cmp(&w[b]).then(a.cmp(&b)))
                .unwrap();
            let inv = right.mpp.get(p, q).inv().unwrap();
            right.scale_row(p, &inv);
            for j in 0..rr {
                if j != p && !right.mpp.get(j, q).is_zero() {
                    let x = -right.mpp.get(j, q);
                    right.add_row(j, p, &x);
                }
            }
            let owner_q = col_owner[q].unwrap();
            for &b in &qcols {
                if b != q && !right.mpp.get(p, b).is_zero() {
                    let x = -right.mpp.get(p, b);
                    right.mpp.add_col_multiple(b, q, &x);
                    mp.add_col_multiple(b, q, &x);
                    let owner_b = col_owner[b].unwrap();
                    debug_assert!(keys[owner_b] <= keys[owner_q]);
                    mp.add_row_multiple(owner_q, owner_b, &(-&x));
                }
            }
            q_row[q] = Some(p);
            r_used[p] = true;
        }

        let mut new_active: Vec<Option<Strand>> = vec![None; rr];
        for (j, strand) in active.drain(..).enumerate() {
            match row_pivot[j].and_then(|c| q_row[c]) {
                Some(p) => {
                    let mut st = strand;
                    st.degrees.push(w[p]);
                    new_active[p] = Some(st);
                }
                None => finished.push(strand),
            }
        }
        for p in 0..rr {
            if new_active[p].is_none() {
                let marker = if k_row[p].is_some() { KeyItem::High } else { KeyItem::Low };
                new_active[p] = Some(Strand { start: i + 1, degrees: vec![w[p]], marker });
            }
        }
        active = new_active.into_iter().map(Option::unwrap).collect();
        reduced_p.push(mp);
        reduced_pp.push(mpp);
        carry = next;
    }
    finished.extend(active);
    (finished, reduced_p, reduced_pp)
}

/// Decomposes a vector bundle on the chain into line bundles.
pub fn reduce_chain(data: &ChainData) -> Result<ChainReduction> {
    data.validate_vector_bundle()?;
    let (strands, _, _) = reduce_strands(data);
    let mut bundles: Vec<Vec<i64>> = strands
        .into_iter()
        .map(|st| {
            debug_assert_eq!(st.degrees.len(), data.s);
            st.degrees
        })
        .collect();
    bundles.sort();
    let weights = (0..data.s).map(|i| bundles.iter().map(|b| b[i]).collect()).collect();
    let transformed = ChainData::identity(data.field, weights)?;
    Ok(ChainReduction { transformed, bundles })
}

/// Decomposes a torsion-free sheaf on the chain into line bundles on
/// intervals of components.
pub fn decompose_torsion_free(data: &ChainData) -> Result<Vec<IntervalLineBundle>> {
    data.validate_torsion_free()?;
    let (strands, _, _) = reduce_strands(data);
    let mut out: Vec<IntervalLineBundle> = strands.into_iter().map(Strand::into_interval).collect();
    out.sort();
    Ok(out)
}

/// The node matrices after reduction: every row and column of each stacked
/// pair carries at most one nonzero entry per block, equal to 1.
pub fn reduced_matrices(data: &ChainData) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
    data.validate_torsion_free()?;
    let (_, p, pp) = reduce_strands(data);
    Ok((p, pp))
}

/// A random automorphism of `⊕_j O(d_j)` evaluated at the two ends of a
/// component: `(T', T'')` with `t'_jk = t''_jk` when `d_j = d_k`, both zero when
/// `d_j < d_k`, independent otherwise.
fn random_component_pair<R: Rng>(field: Field, w: &[i64], rng: &mut R) -> (Matrix, Matrix) {
    let n = w.len();
    loop {
        let mut t1 = Matrix::zero(field, n, n);
        let mut t2 = Matrix::zero(field, n, n);
        for j in 0..n {
            for k in 0..n {
                match w[k].cmp(&w[j]) {
                    Ordering::Greater => {}
                    Ordering::Equal => {
                        let x = field.random_elem(rng);
                        t1.set(j, k, x.clone());
                        t2.set(j, k, x);
                    }
                    Ordering::Less => {
                        t1.set(j, k, field.random_elem(rng));
                        t2.set(j, k, field.random_elem(rng));
                    }
                }
            }
        }
        if t1.is_invertible() && t2.is_invertible() {
            return (t1, t2);
        }
    }
}

fn random_invertible<R: Rng>(field: Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| field.random_elem(rng)).collect()).collect();
        let m = Matrix::from_rows(field, n, rows).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

/// Applies random admissible changes (column operations at every node,
/// weight-respecting automorphisms of every component, and relabelings of
/// rows together with their weights). The result describes an isomorphic
/// sheaf.
pub fn random_admissible_transform(data: &ChainData, seed: u64) -> ChainData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = data.field;
    let mut out = data.clone();
    for i in 0..data.s.saturating_sub(1) {
        let s = random_invertible(field, data.node_dims[i], &mut rng);
        out.m_prime[i] = out.m_prime[i].mul(&s);
        out.m_dblprime[i] = out.m_dblprime[i].mul(&s);
    }
    for c in 0..data.s {
        let (t1, t2) = random_component_pair(field, &data.weights[c], &mut rng);
        if c + 1 < data.s {
            out.m_prime[c] = t1.mul(&out.m_prime[c]);
        }
        if c > 0 {
            out.m_dblprime[c - 1] = t2.mul(&out.m_dblprime[c - 1]);
        }
        let n = data.weights[c].len();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            perm.swap(k, rng.gen_range(0..=k));
        }
        out.weights[c] = perm.iter().map(|&p| data.weights[c][p]).collect();
        if c + 1 < data.s {
            out.m_prime[c] = out.m_prime[c].permute_rows(&perm);
        }
        if c > 0 {
            out.m_dblprime[c - 1] = out.m_dblprime[c - 1].permute_rows(&perm);
        }
    }
    out
}

/// Random vector-bundle data: random weights in `[lo, hi]` and random
/// invertible node matrices.
pub fn random_vector_bundle_data<R: Rng>(field: Field, s: usize, r: usize, lo: i64, hi: i64, rng: &mut R) -> ChainData {
    let weights: Vec<Vec<i64>> = (0..s).map(|_| (0..r).map(|_| rng.gen_range(lo..=hi)).collect()).collect();
    let mut data = ChainData::identity(field, weights).expect("equal ranks");
    for i in 0..s - 1 {
        data.m_prime[i] = random_invertible(field, r, rng);
        data.m_dblprime[i] = random_invertible(field, r, rng);
    }
    data
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn identity_data_reads_off_rows() {
        let data = ChainData::identity(q(), vec![vec![3, 1], vec![0, 0]]).unwrap();
        let red = reduce_chain(&data).unwrap();
        assert_eq!(red.bundles, vec![vec![1, 0], vec![3, 0]]);
        assert!(red.transformed.m_prime.iter().all(Matrix::is_identity));
    }

    #[test]
    fn rank_one_scaling() {
        let mut data = ChainData::identity(q(), vec![vec![4], vec![-2]]).unwrap();
        data.m_prime[0] = Matrix::from_i64(q(), &[vec![5]]);
        data.m_dblprime[0] = Matrix::from_i64(q(), &[vec![-3]]);
        assert_eq!(reduce_chain(&data).unwrap().bundles, vec![vec![4, -2]]);
    }

    #[test]
    fn swapped_gluing_changes_the_bundle() {
        let mut data = ChainData::identity(q(), vec![vec![3, 1], vec![0, 5]]).unwrap();
        assert_eq!(reduce_chain(&data).unwrap().bundles, vec![vec![1, 5], vec![3, 0]]);
        data.m_prime[0] = Matrix::from_i64(q(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(reduce_chain(&data).unwrap().bundles, vec![vec![1, 0], vec![3, 5]]);
    }

    #[test]
    fn generic_gluing_pairs_extreme_degrees() {
        // A generic gluing on two components with distinct weights matches
        // the highest weight on the left with the lowest on the right.
        let mut data = ChainData::identity(q(), vec![vec![2, 0], vec![1, 4]]).unwrap();
        data.m_prime[0] = Matrix::from_i64(q(), &[vec![1, 1], vec![1, 2]]);
        let red = reduce_chain(&data).unwrap();
        assert_eq!(red.bundles, vec![vec![0, 4], vec![2, 1]]);
    }

    #[test]
    fn singular_gluing_rejected() {
        let mut data = ChainData::identity(q(), vec![vec![0, 0], vec![0, 0]]).unwrap();
        data.m_prime[0] = Matrix::from_i64(q(), &[vec![1, 1], vec![1, 1]]);
        assert!(matches!(reduce_chain(&data), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn single_component() {
        let data = ChainData::identity(q(), vec![vec![2, -1]]).unwrap();
        assert_eq!(reduce_chain(&data).unwrap().bundles, vec![vec![-1], vec![2]]);
    }

    #[test]
    fn torsion_free_examples() {
        let f = q();
        let unglued = ChainData {
            field: f,
            s: 2,
            ranks: vec![1, 1],
            node_dims: vec![0],
            weights: vec![vec![3], vec![-1]],
            m_prime: vec![Matrix::zero(f, 1, 0)],
            m_dblprime: vec![Matrix::zero(f, 1, 0)],
        };
        let got = decompose_torsion_free(&unglued).unwrap();
        assert_eq!(got, vec![
            IntervalLineBundle { start: 1, end: 1, degrees: vec![3] },
            IntervalLineBundle { start: 2, end: 2, degrees: vec![-1] },
        ]);

        let partial = ChainData {
            field: f,
            s: 2,
            ranks: vec![2, 1],
            node_dims: vec![1],
            weights: vec![vec![5, 7], vec![2]],
            m_prime: vec![Matrix::from_i64(f, &[vec![1], vec![0]])],
            m_dblprime: vec![Matrix::from_i64(f, &[vec![1]])],
        };
        let got = decompose_torsion_free(&partial).unwrap();
        assert_eq!(got, vec![
            IntervalLineBundle { start: 1, end: 1, degrees: vec![7] },
            IntervalLineBundle { start: 1, end: 2, degrees: vec![5, 2] },
        ]);
    }

    #[test]
    fn non_injective_node_rejected() {
        let f = q();
        let data = ChainData {
            field: f,
            s: 2,
            ranks: vec![1, 1],
            node_dims: vec![2],
            weights: vec![vec![0], vec![0]],
            m_prime: vec![Matrix::from_i64(f, &[vec![1, 1]])],
            m_dblprime: vec![Matrix::from_i64(f, &[vec![1, 1]])],
        };
        assert!(matches!(decompose_torsion_free(&data), Err(Error::RankConditionViolated(_))));
    }

    #[test]
    fn transform_preserves_classification() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [q(), Field::Prime(5)] {
            for _ in 0..30 {
                let data = random_vector_bundle_data(field, 3, 3, -2, 2, &mut rng);
                let base = reduce_chain(&data).unwrap();
                for seed in 0..3 {
                    let moved = random_admissible_transform(&data, seed);
                    assert_eq!(reduce_chain(&moved).unwrap().bundles, base.bundles);
                }
                let again = reduce_chain(&base.transformed).unwrap();
                assert_eq!(again, base);
                let tf = decompose_torsion_free(&data).unwrap();
                let mut from_tf: Vec<Vec<i64>> = tf.into_iter().map(|b| b.degrees).collect();
                from_tf.sort();
                assert_eq!(from_tf, base.bundles);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let data = ChainData::identity(q(), vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(ChainData::from_json(q(), &data.to_json()).unwrap(), data);
    }
}
