//! Band data `(d, m, λ)` for indecomposable vector bundles on a cycle of `s`
//! projective lines, their gluing data, enumeration, and the finite/tame/wild
//! dispatch on dual graphs.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::chain::ChainData;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::linalg::{json_usize, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BandDatum {
    pub s: usize,
    pub d: Vec<i64>,
    pub m: usize,
    pub lambda: FieldElem,
}

/// Rotates `d` left by `k` positions.
pub fn rotate(d: &[i64], k: usize) -> Vec<i64> {
    if d.is_empty() {
        return Vec::new();
    }
    let k = k % d.len();
    d[k..].iter().chain(&d[..k]).copied().collect()
}

fn check_length(d: &[i64], s: usize) -> Result<usize> {
    if s == 0 || d.is_empty() || !d.len().is_multiple_of(s) {
        return Err(Error::LengthNotMultiple { len: d.len(), s });
    }
    Ok(d.len() / s)
}

/// True when `d` is not a repetition of a block of `l·s` entries with `l < r`.
pub fn is_nonperiodic(d: &[i64], s: usize) -> Result<bool> {
    let r = check_length(d, s)?;
    Ok(!(1..r).filter(|l| r % l == 0).any(|l| rotate(d, l * s) == d))
}

/// The lexicographically least `s`-shift of `d`.
pub fn canonical_sequence(d: &[i64], s: usize) -> Result<Vec<i64>> {
    let r = check_length(d, s)?;
    Ok((0..r).map(|k| rotate(d, k * s)).min().unwrap())
}

impl BandDatum {
    pub fn new(s: usize, d: Vec<i64>, m: usize, lambda: FieldElem) -> Result<BandDatum> {
        let b = BandDatum { s, d, m, lambda };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 || self.d.is_empty() || !self.d.len().is_multiple_of(self.s) {
            return Err(Error::InvalidBandDatum(format!(
                "length {} is not a positive multiple of s = {}",
                self.d.len(),
                self.s
            )));
        }
        if !is_nonperiodic(&self.d, self.s)? {
            return Err(Error::InvalidBandDatum(format!("{:?} is {}-periodic", self.d, self.s)));
        }
        if self.m == 0 {
            return Err(Error::InvalidBandDatum("multiplicity must be at least 1".into()));
        }
        if self.lambda.is_zero() {
            return Err(Error::InvalidBandDatum("lambda must be nonzero".into()));
        }
        Ok(())
    }

    /// `r`, the number of turns around the cycle.
    pub fn turns(&self) -> usize {
        self.d.len() / self.s
    }

    pub fn field(&self) -> Field {
        self.lambda.field()
    }

    pub fn to_json(&self) -> Value {
        json!({ "s": self.s, "d": self.d, "m": self.m, "lambda": self.lambda.to_string() })
    }

    pub fn from_json(field: Field, v: &Value) -> Result<BandDatum> {
        let s = json_usize(v, "s")?;
        let d = int_list(v, "d")?;
        let m = json_usize(v, "m")?;
        let lambda = match v.get("lambda") {
            Some(Value::String(x)) => field.parse_elem(x)?,
            Some(Value::Number(n)) => field.from_i64(n.as_i64().ok_or_else(|| Error::Parse("bad lambda".into()))?),
            _ => return Err(Error::Parse("missing `lambda`".into())),
        };
        BandDatum::new(s, d, m, lambda)
    }
}

pub(crate) fn int_list(v: &Value, key: &str) -> Result<Vec<i64>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("missing `{key}`")))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| Error::Parse(format!("`{key}` must hold integers"))))
        .collect()
}

pub fn canonical_form(b: &BandDatum) -> Result<BandDatum> {
    b.validate()?;
    Ok(BandDatum { d: canonical_sequence(&b.d, b.s)?, ..b.clone() })
}

pub fn are_isomorphic(b1: &BandDatum, b2: &BandDatum) -> Result<bool> {
    b1.validate()?;
    b2.validate()?;
    if b1.s != b2.s {
        return Err(Error::InvalidBandDatum(format!("cycle lengths differ ({} vs {})", b1.s, b2.s)));
    }
    Ok(b1.m == b2.m
        && b1.lambda == b2.lambda
        && b1.d.len() == b2.d.len()
        && canonical_sequence(&b1.d, b1.s)? == canonical_sequence(&b2.d, b2.s)?)
}

/// Rank `m·r` and multidegree `δ_i = Σ_{j ≡ i (mod s)} d_j`.
pub fn rank_degree(b: &BandDatum) -> Result<(usize, Vec<i64>)> {
    b.validate()?;
    let mut deg = vec![0; b.s];
    for (j, &x) in b.d.iter().enumerate() {
        deg[j % b.s] += x;
    }
    Ok((b.m * b.turns(), deg))
}

/// Identifications at one node of the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeGluing {
    /// 1-based node index `i`; the node joins component `i` to component
    /// `i+1 (mod s)`.
    pub node: usize,
    /// 1-based strands `j ≡ i (mod s)` whose right end lies at this node; each
    /// is glued to the left end of strand `j+1` (strand 1 after `rs`).
    pub strands: Vec<usize>,
    /// `(m·r)×(m·r)`; entry `(a, b)` is the coefficient of the `b`-th left
    /// basis vector in the image of the `a`-th right basis vector, so left
    /// values are `matrixᵀ` times right values.
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    pub s: usize,
    pub m: usize,
    pub degrees: Vec<i64>,
    pub nodes: Vec<NodeGluing>,
}

impl GluingData {
    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s,
            "m": self.m,
            "degrees": self.degrees,
            "nodes": self.nodes.iter().map(|n| json!({
                "node": n.node,
                "strands": n.strands,
                "matrix": n.matrix.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The `m×m` closing identification: `e'_k ↦ λ·e''_k + e''_{k-1}`.
pub fn jordan_block(lambda: &FieldElem, m: usize) -> Matrix {
    let field = lambda.field();
    let mut j = Matrix::scalar(field, m, lambda);
    for k in 1..m {
        j.set(k, k - 1, field.one());
    }
    j
}

pub fn build_gluing(b: &BandDatum) -> Result<GluingData> {
    b.validate()?;
    let field = b.field();
    let (s, r, m) = (b.s, b.turns(), b.m);
    let rs = r * s;
    let nodes = (1..=s)
        .map(|i| {
            let strands: Vec<usize> = (0..r).map(|t| i + t * s).collect();
            let blocks: Vec<Matrix> = strands
                .iter()
                .map(|&j| if j == rs { jordan_block(&b.lambda, m) } else { Matrix::identity(field, m) })
                .collect();
            NodeGluing { node: i, strands, matrix: Matrix::block_diag(field, &blocks) }
        })
        .collect();
    Ok(GluingData { s, m, degrees: b.d.clone(), nodes })
}

/// All non-`s`-periodic `d ∈ Z_{≥0}^{rs}` with residue-class sums `delta`, one
/// per `s`-shift orbit (the lexicographically least), in increasing order.
pub fn enumerate_nonneg(s: usize, r: usize, delta: &[i64]) -> Vec<Vec<i64>> {
    if s == 0 || r == 0 || delta.len() != s || delta.iter().any(|&x| x < 0) {
        return Vec::new();
    }
    let per_class: Vec<Vec<Vec<i64>>> = delta.iter().map(|&total| compositions(total, r)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; s];
    loop {
        let mut d = vec![0; r * s];
        for (i, comp) in per_class.iter().enumerate() {
            for (t, &x) in comp[idx[i]].iter().enumerate() {
                d[i + t * s] = x;
            }
        }
        if is_nonperiodic(&d, s).unwrap() && canonical_sequence(&d, s).unwrap() == d {
            out.push(d);
        }
        let mut i = 0;
        loop {
            if i == s {
                out.sort();
                return out;
            }
            idx[i] += 1;
            if idx[i] < per_class[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Ordered ways of writing `total` as `parts` nonnegative integers.
fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Number of one-parameter families of indecomposables of rank `r` and
/// multidegree `delta`, counted up to twist.
pub fn nu_count(s: usize, r: usize, delta: &[i64]) -> usize {
    enumerate_nonneg(s, r, delta).len()
}

/// Removes the closing identification of the band and unrolls it into a chain
/// of `r·s` components, strand `j` on component `j` with `m` copies and
/// identity gluings.
pub fn cut_cycle(b: &BandDatum) -> Result<ChainData> {
    b.validate()?;
    let weights = b.d.iter().map(|&x| vec![x; b.m]).collect();
    ChainData::identity(b.field(), weights)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub genera: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveType {
    Finite,
    TameBounded,
    TameUnbounded,
    Wild,
}

impl fmt::Display for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveType::Finite => "FINITE",
            CurveType::TameBounded => "TAME_BOUNDED",
            CurveType::TameUnbounded => "TAME_UNBOUNDED",
            CurveType::Wild => "WILD",
        })
    }
}

impl DualGraph {
    pub fn new(genera: Vec<u32>, edges: Vec<(usize, usize)>) -> DualGraph {
        DualGraph { genera, edges }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.genera.len();
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..n).all(|v| find(&mut parent, v) == root)
    }

    pub fn to_json(&self) -> Value {
        json!({ "genera": self.genera, "edges": self.edges.iter().map(|(u, v)| json!([u, v])).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value) -> Result<DualGraph> {
        let genera = v
            .get("genera")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `genera`".into()))?
            .iter()
            .map(|g| g.as_u64().map(|g| g as u32).ok_or_else(|| Error::Parse("genera must be nonnegative integers".into())))
            .collect::<Result<Vec<_>>>()?;
        let n = genera.len();
        let edges = v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `edges`".into()))?
            .iter()
            .map(|e| {
                let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::Parse(format!("bad edge {e}")))?;
                let u = pair[0].as_u64().ok_or_else(|| Error::Parse(format!("bad edge {e}")))? as usize;
                let w = pair[1].as_u64().ok_or_else(|| Error::Parse(format!("bad edge {e}")))? as usize;
                if u >= n || w >= n {
                    return Err(Error::Parse(format!("edge {e} refers to a missing vertex")));
                }
                Ok((u, w))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DualGraph { genera, edges })
    }
}

/// Vector-bundle type of a curve given by its dual graph: chains of rational
/// curves are finite, a smooth elliptic curve is tame bounded, cycles of
/// rational curves are tame unbounded, everything else is wild.
pub fn curve_vb_type(g: &DualGraph) -> Result<CurveType> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.genera.len();
    let e = g.edges.len();
    if n == 1 && e == 0 {
        return Ok(match g.genera[0] {
            0 => CurveType::Finite,
            1 => CurveType::TameBounded,
            _ => CurveType::Wild,
        });
    }
    if g.genera.iter().any(|&x| x > 0) {
        return Ok(CurveType::Wild);
    }
    let mut degree = vec![0usize; n];
    for &(u, v) in &g.edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let has_loop = g.edges.iter().any(|(u, v)| u == v);
    if !has_loop && e + 1 == n && degree.iter().all(|&x| x <= 2) {
        return Ok(CurveType::Finite);
    }
    if e == n && degree.iter().all(|&x| x == 2) {
        return Ok(CurveType::TameUnbounded);
    }
    Ok(CurveType::Wild)
}

/// A random valid band datum with `r·s ≤ max_len`, entries in `[lo, hi]` and
/// `m ≤ max_m`.
pub fn random_band<R: Rng + ?Sized>(field: Field, max_len: usize, lo: i64, hi: i64, max_m: usize, rng: &mut R) -> BandDatum {
    loop {
        let s = rng.gen_range(1..=max_len);
        let r = rng.gen_range(1..=max_len / s);
        let d: Vec<i64> = (0..r * s).map(|_| rng.gen_range(lo..=hi)).collect();
        let m = rng.gen_range(1..=max_m);
        let lambda = field.random_nonzero(rng);
        if let Ok(b) = BandDatum::new(s, d, m, lambda) {
            return b;
        }
    }
}
