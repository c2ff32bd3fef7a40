//! Wildness gadgets: embedding modules over a finitely generated algebra into
//! representations of the free algebra in two generators, intertwiner spaces,
//! and the explicit matrix families witnessing wildness of curves.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::linalg::{json_usize, Matrix};

/// A module given by the action matrices of `m` generators on `k^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub n: usize,
    pub mats: Vec<Matrix>,
}

impl ModulePresentation {
    pub fn new(n: usize, mats: Vec<Matrix>) -> Result<ModulePresentation> {
        if let Some(a) = mats.iter().find(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::SizeMismatch(format!("expected {n}x{n}, got {}x{}", a.rows(), a.cols())));
        }
        Ok(ModulePresentation { n, mats })
    }

    pub fn field(&self) -> Option<Field> {
        self.mats.first().map(Matrix::field)
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "mats": self.mats.iter().map(Matrix::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(field: Field, v: &Value) -> Result<ModulePresentation> {
        let n = json_usize(v, "n")?;
        let mats = v
            .get("mats")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `mats`".into()))?
            .iter()
            .map(|m| Matrix::from_json(field, m))
            .collect::<Result<Vec<_>>>()?;
        ModulePresentation::new(n, mats)
    }

    pub fn random<R: Rng + ?Sized>(field: Field, n: usize, m: usize, rng: &mut R) -> ModulePresentation {
        let mats = (0..m)
            .map(|_| {
                let rows = (0..n).map(|_| (0..n).map(|_| field.random_elem(rng)).collect()).collect();
                Matrix::from_rows(field, n, rows).unwrap()
            })
            .collect();
        ModulePresentation { n, mats }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma2Module {
    pub dim: usize,
    pub a: Matrix,
    pub b: Matrix,
}

impl Sigma2Module {
    pub fn new(a: Matrix, b: Matrix) -> Result<Sigma2Module> {
        let dim = a.rows();
        if !a.is_square() || b.rows() != dim || b.cols() != dim {
            return Err(Error::SizeMismatch(format!(
                "need two square matrices of one size, got {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(Sigma2Module { dim, a, b })
    }

    pub fn to_json(&self) -> Value {
        json!({ "dim": self.dim, "A": self.a.to_json(), "B": self.b.to_json() })
    }

    pub fn from_json(field: Field, v: &Value) -> Result<Sigma2Module> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing `{k}`")));
        Sigma2Module::new(Matrix::from_json(field, get("A")?)?, Matrix::from_json(field, get("B")?)?)
    }

    pub fn as_presentation(&self) -> ModulePresentation {
        ModulePresentation { n: self.dim, mats: vec![self.a.clone(), self.b.clone()] }
    }
}

/// `A = diag(λ_1 I, …, λ_m I)` and `B` block upper bidiagonal with `A_i` on
/// the diagonal and identities above it. Without `lambdas` the values
/// `0, 1, …, m−1` are used.
pub fn embed_sigma2(field: Field, module: &ModulePresentation, lambdas: Option<&[FieldElem]>) -> Result<Sigma2Module> {
    let m = module.mats.len();
    if m == 0 {
        return Err(Error::SizeMismatch("module needs at least one generator".into()));
    }
    let lambdas = match lambdas {
        Some(l) if l.len() != m => {
            return Err(Error::SizeMismatch(format!("{} lambdas for {m} generators", l.len())));
        }
        Some(l) => l.to_vec(),
        None => field.distinct_elements(m)?,
    };
    for i in 0..m {
        if lambdas[i + 1..].contains(&lambdas[i]) {
            return Err(Error::DuplicateLambda);
        }
    }
    let n = module.n;
    let dim = m * n;
    let blocks: Vec<Matrix> = lambdas.iter().map(|l| Matrix::scalar(field, n, l)).collect();
    let a = Matrix::block_diag(field, &blocks);
    let mut b = Matrix::block_diag(field, &module.mats);
    let id = Matrix::identity(field, n);
    for i in 0..m.saturating_sub(1) {
        b.set_block(i * n, (i + 1) * n, &id);
    }
    Sigma2Module::new(a, b).map(|s| Sigma2Module { dim, ..s })
}

/// A basis of `{S (q×p) : S·X = Y·S for every pair (X, Y)}` with `X` of size
/// `p` and `Y` of size `q`.
pub fn intertwiners(field: Field, pairs: &[(&Matrix, &Matrix)], p: usize, q: usize) -> Vec<Matrix> {
    let unknowns = p * q;
    if unknowns == 0 {
        return Vec::new();
    }
    let var = |r: usize, c: usize| r * p + c;
    let mut rows = Vec::new();
    for (x, y) in pairs {
        for r in 0..q {
            for c in 0..p {
                let mut row = vec![field.zero(); unknowns];
                for k in 0..p {
                    let v = var(r, k);
                    row[v] = &row[v] + x.get(k, c);
                }
                for k in 0..q {
                    let v = var(k, c);
                    row[v] = &row[v] - y.get(r, k);
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..unknowns)
            .map(|i| (0..unknowns).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(field, unknowns, rows).unwrap().kernel()
    };
    kernel
        .into_iter()
        .map(|v| Matrix::from_rows(field, p, v.chunks(p).map(<[FieldElem]>::to_vec).collect()).unwrap())
        .collect()
}

fn module_field(m: &ModulePresentation, n: &ModulePresentation) -> Field {
    m.field().or(n.field()).unwrap_or(Field::Rational)
}

pub fn hom_dim(m: &ModulePresentation, n: &ModulePresentation) -> Result<usize> {
    if m.mats.len() != n.mats.len() {
        return Err(Error::GeneratorCountMismatch(m.mats.len(), n.mats.len()));
    }
    let pairs: Vec<(&Matrix, &Matrix)> = m.mats.iter().zip(&n.mats).collect();
    Ok(intertwiners(module_field(m, n), &pairs, m.n, n.n).len())
}

pub fn hom_dim_sigma2(p: &Sigma2Module, q: &Sigma2Module) -> usize {
    intertwiners(p.a.field(), &[(&p.a, &q.a), (&p.b, &q.b)], p.dim, q.dim).len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic,
    NotIsomorphic,
    Undetermined,
}

impl fmt::Display for IsoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsoVerdict::Isomorphic => "isomorphic",
            IsoVerdict::NotIsomorphic => "not isomorphic",
            IsoVerdict::Undetermined => "undetermined",
        })
    }
}

/// Decides isomorphism by searching the intertwiner space for an invertible
/// element with 20 random combinations of a basis. A negative answer is only
/// given when it is certain (different dimensions, or Hom-dimensions that
/// an isomorphism would force to agree).
pub fn are_isomorphic<R: Rng + ?Sized>(m: &ModulePresentation, n: &ModulePresentation, rng: &mut R) -> Result<IsoVerdict> {
    if m.mats.len() != n.mats.len() {
        return Err(Error::GeneratorCountMismatch(m.mats.len(), n.mats.len()));
    }
    if m.n != n.n {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    let field = module_field(m, n);
    let pairs: Vec<(&Matrix, &Matrix)> = m.mats.iter().zip(&n.mats).collect();
    let basis = intertwiners(field, &pairs, m.n, n.n);
    if m.n == 0 {
        return Ok(IsoVerdict::Isomorphic);
    }
    if basis.is_empty() || hom_dim(m, m)? != hom_dim(n, n)? || hom_dim(n, m)? != basis.len() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    for _ in 0..20 {
        let mut s = Matrix::zero(field, n.n, m.n);
        for b in &basis {
            let c = field.random_elem(rng);
            for i in 0..n.n {
                for j in 0..m.n {
                    s.set(i, j, s.get(i, j) + &(&c * b.get(i, j)));
                }
            }
        }
        if s.is_invertible() {
            return Ok(IsoVerdict::Isomorphic);
        }
    }
    Ok(IsoVerdict::Undetermined)
}

/// A polynomial with integer coefficients in a fixed list of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    pub terms: BTreeMap<Vec<u32>, i64>,
}

impl IntPoly {
    fn constant(c: i64, nvars: usize) -> IntPoly {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(vec![0; nvars], c);
        }
        IntPoly { terms }
    }

    fn monomial(c: i64, exps: Vec<u32>) -> IntPoly {
        IntPoly { terms: BTreeMap::from([(exps, c)]) }
    }

    pub fn eval(&self, field: Field, point: &[FieldElem]) -> FieldElem {
        let mut acc = field.zero();
        for (e, &c) in &self.terms {
            let mut t = field.from_i64(c);
            for (x, &k) in point.iter().zip(e) {
                t = &t * &x.pow(k);
            }
            acc = &acc + &t;
        }
        acc
    }

    fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }
}

/// A matrix whose entries are integer polynomials in named variables.
#[derive(Clone, Debug)]
pub struct SymbolicMatrix {
    pub vars: Vec<&'static str>,
    pub entries: Vec<Vec<IntPoly>>,
}

impl SymbolicMatrix {
    fn constant(vars: &[&'static str], rows: &[Vec<i64>]) -> SymbolicMatrix {
        let nv = vars.len();
        SymbolicMatrix {
            vars: vars.to_vec(),
            entries: rows.iter().map(|r| r.iter().map(|&c| IntPoly::constant(c, nv)).collect()).collect(),
        }
    }

    /// Puts the monomial `∏ vars[k]^1` over `names` at `(i, j)`.
    fn put(&mut self, i: usize, j: usize, names: &[&str]) {
        let mut e = vec![0; self.vars.len()];
        for n in names {
            let k = self.vars.iter().position(|v| v == n).expect("known variable");
            e[k] += 1;
        }
        self.entries[i][j] = IntPoly::monomial(1, e);
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn evaluate(&self, field: Field, point: &[FieldElem]) -> Matrix {
        let rows = self.entries.iter().map(|r| r.iter().map(|p| p.eval(field, point)).collect()).collect();
        Matrix::from_rows(field, self.size(), rows).unwrap()
    }

    /// The determinant as a polynomial, recovered by interpolation on a grid
    /// whose size in each variable bounds the degree of the determinant in it.
    pub fn determinant(&self, field: Field) -> BTreeMap<Vec<u32>, FieldElem> {
        let nv = self.vars.len();
        let bounds: Vec<u32> = (0..nv)
            .map(|k| self.entries.iter().map(|row| row.iter().map(|p| p.degree_in(k)).max().unwrap_or(0)).sum())
            .collect();
        let mut point = vec![field.zero(); nv];
        let mut out = interpolate(self, field, &bounds, 0, &mut point);
        out.retain(|_, c| !c.is_zero());
        out
    }
}

fn interpolate(
    m: &SymbolicMatrix,
    field: Field,
    bounds: &[u32],
    var: usize,
    point: &mut Vec<FieldElem>,
) -> BTreeMap<Vec<u32>, FieldElem> {
    let nv = bounds.len();
    if var == nv {
        let det = m.evaluate(field, point).determinant().unwrap();
        return BTreeMap::from([(vec![0; nv], det)]);
    }
    let deg = bounds[var] as usize;
    let nodes: Vec<FieldElem> = (0..=deg as i64).map(|i| field.from_i64(i)).collect();
    let samples: Vec<BTreeMap<Vec<u32>, FieldElem>> = nodes
        .iter()
        .map(|x| {
            point[var] = x.clone();
            interpolate(m, field, bounds, var + 1, point)
        })
        .collect();
    let vandermonde =
        Matrix::from_rows(field, deg + 1, nodes.iter().map(|x| (0..=deg as u32).map(|k| x.pow(k)).collect()).collect())
            .unwrap();
    let inv = vandermonde.inverse().expect("distinct interpolation nodes");
    let mut out: BTreeMap<Vec<u32>, FieldElem> = BTreeMap::new();
    for k in 0..=deg {
        for (i, sample) in samples.iter().enumerate() {
            let w = inv.get(k, i);
            if w.is_zero() {
                continue;
            }
            for (e, c) in sample {
                let mut e = e.clone();
                e[var] = k as u32;
                let slot = out.entry(e).or_insert_with(|| field.zero());
                *slot = &*slot + &(w * c);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessKind {
    /// Extension pattern over a curve of higher genus.
    Genus,
    /// Strict family on a curve with a non-rational component.
    NonRational,
    /// Family for a component whose normalization is not semisimple at a point.
    NonSemisimple,
    /// Family at a point of multiplicity at least three.
    TriplePoint,
    /// Family at a component meeting three others.
    Trivalent,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 5] =
        [WitnessKind::Genus, WitnessKind::NonRational, WitnessKind::NonSemisimple, WitnessKind::TriplePoint, WitnessKind::Trivalent];

    pub fn name(&self) -> &'static str {
        match self {
            WitnessKind::Genus => "genus",
            WitnessKind::NonRational => "non-rational",
            WitnessKind::NonSemisimple => "non-semisimple",
            WitnessKind::TriplePoint => "triple-point",
            WitnessKind::Trivalent => "trivalent",
        }
    }

    pub fn construction(&self) -> &'static str {
        match self {
            WitnessKind::Genus => "extensions of O(x_3)+O(x_4)+O(x_5) by O(x_1)+O(x_2) on a curve of genus > 1",
            WitnessKind::NonRational => "strict family for a non-rational component",
            WitnessKind::NonSemisimple => "strict family at a point with non-semisimple local algebra",
            WitnessKind::TriplePoint => "strict family at a singular point of multiplicity >= 3",
            WitnessKind::Trivalent => "strict family at a component meeting three others",
        }
    }

    /// Names of the indeterminates the kind needs.
    pub fn variables(&self) -> &'static [&'static str] {
        match self {
            WitnessKind::Genus => &[],
            WitnessKind::NonSemisimple => &["alpha", "z1", "z2", "z3", "z4", "z5"],
            _ => &["z1", "z2"],
        }
    }

    /// The matrices of the family with their names, each asserted invertible.
    pub fn symbolic(&self) -> Vec<(&'static str, SymbolicMatrix)> {
        let vars = self.variables();
        match self {
            WitnessKind::Genus => Vec::new(),
            WitnessKind::NonRational => {
                let mut u = SymbolicMatrix::constant(vars, &[
                    vec![0, 0, 0, 1],
                    vec![0, 0, 1, 1],
                    vec![0, 1, 1, 0],
                    vec![1, 0, 1, 0],
                ]);
                u.put(2, 3, &["z1"]);
                u.put(3, 3, &["z2"]);
                vec![("u", u)]
            }
            WitnessKind::NonSemisimple => {
                let id: Vec<Vec<i64>> = (0..7).map(|i| (0..7).map(|j| i64::from(i == j)).collect()).collect();
                let mut u = SymbolicMatrix::constant(vars, &id);
                u.put(0, 4, &["alpha"]);
                u.put(1, 2, &["alpha"]);
                u.put(2, 3, &["alpha", "z1"]);
                u.put(2, 4, &["alpha", "z2"]);
                u.put(3, 5, &["alpha", "z3"]);
                u.put(4, 5, &["alpha", "z4"]);
                u.put(5, 6, &["alpha", "z5"]);
                vec![("u", u)]
            }
            WitnessKind::TriplePoint => {
                let anti = SymbolicMatrix::constant(vars, &antidiagonal(4));
                let mut u2 = SymbolicMatrix::constant(vars, &[
                    vec![1, 1, 0, 0],
                    vec![0, 1, 1, 1],
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 1],
                ]);
                u2.put(0, 2, &["z1"]);
                u2.put(0, 3, &["z2"]);
                vec![("u_p1", anti), ("u_p2", u2)]
            }
            WitnessKind::Trivalent => {
                let u24 = SymbolicMatrix::constant(vars, &antidiagonal(14));
                let ones = [
                    (5, 3), (6, 1), (7, 2), (9, 4), (10, 6), (10, 9), (11, 5),
                    (11, 7), (11, 10), (12, 8), (13, 9), (13, 12), (14, 10), (14, 12),
                ];
                let mut t: Vec<Vec<i64>> = (0..14).map(|i| (0..14).map(|j| i64::from(i == j)).collect()).collect();
                for (p, q) in ones {
                    t[p - 1][q - 1] = 1;
                }
                let mut u34 = SymbolicMatrix::constant(vars, &t);
                u34.put(12, 10, &["z1"]);
                u34.put(13, 10, &["z2"]);
                vec![("u_24", u24), ("u_34", u34)]
            }
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<WitnessKind> {
        WitnessKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown witness kind `{s}`")))
    }
}

fn antidiagonal(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i + j == n - 1)).collect()).collect()
}

#[derive(Clone, Debug, Default)]
pub struct WitnessParams {
    pub values: BTreeMap<String, FieldElem>,
    pub n: Option<usize>,
    pub a: Option<Matrix>,
    pub b: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessMatrix {
    pub name: String,
    pub matrix: Matrix,
    /// Whether the construction requires this matrix to be invertible.
    pub asserted: bool,
    pub invertible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessMatrixSet {
    pub kind: WitnessKind,
    pub parameters: BTreeMap<String, FieldElem>,
    pub matrices: Vec<WitnessMatrix>,
    pub symbolic_labels: Option<Vec<Vec<String>>>,
}

impl WitnessMatrixSet {
    pub fn all_invertible(&self) -> bool {
        self.matrices.iter().all(|m| !m.asserted || m.invertible)
    }

    pub fn to_json(&self) -> Value {
        let params: BTreeMap<&String, String> = self.parameters.iter().map(|(k, v)| (k, v.to_string())).collect();
        json!({
            "kind": self.kind.name(),
            "construction": self.kind.construction(),
            "parameters": params,
            "matrices": self.matrices.iter().map(|m| json!({
                "name": m.name,
                "matrix": m.matrix.to_json(),
                "asserted_invertible": m.asserted,
                "invertible": m.invertible,
            })).collect::<Vec<_>>(),
            "symbolic_labels": self.symbolic_labels,
            "all_invertible": self.all_invertible(),
        })
    }
}

pub fn witness(field: Field, kind: WitnessKind, params: &WitnessParams) -> Result<WitnessMatrixSet> {
    if kind == WitnessKind::Genus {
        let n = match (&params.a, params.n) {
            (Some(a), _) => a.rows(),
            (None, Some(n)) => n,
            (None, None) => return Err(Error::MissingParameter("n".into())),
        };
        let id = Matrix::identity(field, n);
        let mut matrices = vec![WitnessMatrix { name: "I".into(), matrix: id, asserted: true, invertible: true }];
        for (name, m) in [("A", &params.a), ("B", &params.b)] {
            if let Some(m) = m {
                if m.rows() != n || m.cols() != n {
                    return Err(Error::SizeMismatch(format!("{name} must be {n}x{n}")));
                }
                let invertible = m.is_invertible();
                matrices.push(WitnessMatrix { name: name.into(), matrix: m.clone(), asserted: false, invertible });
            }
        }
        let labels = vec![
            vec!["xi_13*I".to_string(), "xi_14*I".to_string(), "xi_15*I".to_string()],
            vec!["xi_23*I".to_string(), "xi_24*A".to_string(), "xi_25*B".to_string()],
        ];
        return Ok(WitnessMatrixSet { kind, parameters: BTreeMap::new(), matrices, symbolic_labels: Some(labels) });
    }
    let point = kind
        .variables()
        .iter()
        .map(|v| params.values.get(*v).cloned().ok_or_else(|| Error::MissingParameter((*v).into())))
        .collect::<Result<Vec<_>>>()?;
    let parameters = kind.variables().iter().map(|v| (v.to_string(), params.values[*v].clone())).collect();
    let matrices = kind
        .symbolic()
        .into_iter()
        .map(|(name, s)| {
            let matrix = s.evaluate(field, &point);
            let invertible = matrix.is_invertible();
            WitnessMatrix { name: name.into(), matrix, asserted: true, invertible }
        })
        .collect();
    Ok(WitnessMatrixSet { kind, parameters, matrices, symbolic_labels: None })
}
