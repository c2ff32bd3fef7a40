//! Indecomposable Cohen–Macaulay modules over simple elliptic, cusp and
//! Q-cusp singularities, listed as parameter families by rank.

use num_integer::Integer;
use serde_json::{json, Value};

use crate::band::{canonical_sequence, int_list, is_nonperiodic, BandDatum};
use crate::cohom::{is_suitable, pos_part, theta};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspSingularity {
    pub b: Vec<i64>,
}

impl CuspSingularity {
    pub fn new(b: Vec<i64>) -> Result<CuspSingularity> {
        if b.is_empty() {
            return Err(Error::RangeViolation("b must be nonempty".into()));
        }
        if let Some(x) = b.iter().find(|&&x| x < 1) {
            return Err(Error::RangeViolation(format!("b_i must be >= 1, found {x}")));
        }
        Ok(CuspSingularity { b })
    }

    pub fn s(&self) -> usize {
        self.b.len()
    }

    /// Advisory note when `b` is outside the range known to come from an
    /// actual cusp (all `b_i ≥ 2` and some `b_i ≥ 3`).
    pub fn warning(&self) -> Option<String> {
        let ok = self.b.iter().all(|&x| x >= 2) && self.b.iter().map(|&x| x - 2).sum::<i64>() > 0;
        (!ok).then(|| format!("b = {:?} may not be realized by a cusp singularity", self.b))
    }

    pub fn from_json(v: &Value) -> Result<CuspSingularity> {
        CuspSingularity::new(int_list(v, "b")?)
    }

    pub fn to_json(&self) -> Value {
        json!({ "s": self.s(), "b": self.b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimpleEllipticSingularity {
    pub b: i64,
}

impl SimpleEllipticSingularity {
    pub fn new(b: i64) -> Result<SimpleEllipticSingularity> {
        if b < 1 {
            return Err(Error::RangeViolation(format!("b must be >= 1, got {b}")));
        }
        Ok(SimpleEllipticSingularity { b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Half {
    Prime,
    DoublePrime,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CMVariant {
    /// The ring itself.
    Ring,
    /// A one-parameter family of band modules; `lambda` ranges over nonzero
    /// field elements outside `lambda_excluded`.
    Band { s: usize, d: Vec<i64>, m: usize, lambda_excluded: Vec<i64> },
    /// The exceptional module of rank `m + 1`.
    Special { m: usize },
    /// Simple elliptic family `M_{r,d}(nx)` parameterized by a point `x`.
    Atiyah { r: i64, deg: i64, n: usize, origin_excluded: bool },
    /// One of the two summands a σ-stable band module splits into.
    SplitBand { s: usize, d: Vec<i64>, m: usize, lambda: i64, half: Half },
    /// The anti-invariant part of the cover ring.
    AntiInvariant,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CMModuleDescriptor {
    pub rank: usize,
    pub variant: CMVariant,
}

impl CMModuleDescriptor {
    pub fn kind(&self) -> &'static str {
        match &self.variant {
            CMVariant::Ring => "ring",
            CMVariant::Band { .. } => "band",
            CMVariant::Special { .. } => "special",
            CMVariant::Atiyah { .. } => "atiyah",
            CMVariant::SplitBand { half: Half::Prime, .. } => "split_prime",
            CMVariant::SplitBand { half: Half::DoublePrime, .. } => "split_double_prime",
            CMVariant::AntiInvariant => "anti_invariant",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "variant": self.kind(), "rank": self.rank });
        let o = v.as_object_mut().unwrap();
        match &self.variant {
            CMVariant::Ring | CMVariant::AntiInvariant => {}
            CMVariant::Band { s, d, m, lambda_excluded } => {
                o.insert("s".into(), json!(s));
                o.insert("d".into(), json!(d));
                o.insert("m".into(), json!(m));
                o.insert("lambda_excluded".into(), json!(lambda_excluded));
            }
            CMVariant::Special { m } => {
                o.insert("m".into(), json!(m));
            }
            CMVariant::Atiyah { r, deg, n, origin_excluded } => {
                o.insert("r".into(), json!(r));
                o.insert("deg".into(), json!(deg));
                o.insert("n".into(), json!(n));
                o.insert("origin_excluded".into(), json!(origin_excluded));
            }
            CMVariant::SplitBand { s, d, m, lambda, .. } => {
                o.insert("s".into(), json!(s));
                o.insert("d".into(), json!(d));
                o.insert("m".into(), json!(m));
                o.insert("lambda".into(), json!(lambda));
            }
        }
        v
    }

    /// Short parameter description for tables.
    pub fn parameters(&self) -> String {
        match &self.variant {
            CMVariant::Ring | CMVariant::AntiInvariant => String::new(),
            CMVariant::Band { d, m, lambda_excluded, .. } => {
                let ex: Vec<String> = lambda_excluded.iter().map(i64::to_string).collect();
                format!("d={d:?} m={m} lambda not in {{{}}}", ex.join(","))
            }
            CMVariant::Special { m } => format!("m={m}"),
            CMVariant::Atiyah { r, deg, n, origin_excluded } => {
                format!("r={r} d={deg} n={n}{}", if *origin_excluded { " x!=o" } else { "" })
            }
            CMVariant::SplitBand { d, m, lambda, .. } => format!("d={d:?} m={m} lambda={lambda}"),
        }
    }

    /// One band datum from a band family, with the smallest admissible
    /// integer `λ ≥ 2` (or `λ = -1` if nothing else fits); `None` for
    /// non-band descriptors or when the field has no admissible value.
    pub fn sample(&self, field: Field) -> Option<BandDatum> {
        match &self.variant {
            CMVariant::Band { s, d, m, lambda_excluded } => {
                let excluded: Vec<FieldElem> = lambda_excluded.iter().map(|&x| field.from_i64(x)).collect();
                let size = match field {
                    Field::Rational => 64,
                    Field::Prime(p) => p as i64 + 2,
                };
                (2..size)
                    .chain([-1])
                    .map(|l| field.from_i64(l))
                    .find(|l| !l.is_zero() && !excluded.contains(l))
                    .and_then(|l| BandDatum::new(*s, d.clone(), *m, l).ok())
            }
            CMVariant::SplitBand { s, d, m, lambda, .. } => BandDatum::new(*s, d.clone(), *m, field.from_i64(*lambda)).ok(),
            _ => None,
        }
    }
}

fn repeat_b(b: &[i64], len: usize) -> Result<Vec<i64>> {
    if len == 0 || !len.is_multiple_of(b.len()) {
        return Err(Error::LengthNotMultiple { len, s: b.len() });
    }
    Ok((0..len).map(|i| b[i % b.len()]).collect())
}

/// `n_d = Σ(d_i − b_i + 1)^+ − θ(d − B^r)`.
pub fn n_d(d: &[i64], sing: &CuspSingularity) -> Result<usize> {
    let br = repeat_b(&sing.b, d.len())?;
    let sum: i64 = d.iter().zip(&br).map(|(x, b)| pos_part(x - b + 1)).sum();
    let diff: Vec<i64> = d.iter().zip(&br).map(|(x, b)| x - b).collect();
    let v = sum - theta(&diff) as i64;
    debug_assert!(v >= 0);
    Ok(v as usize)
}

/// Canonical suitable, non-periodic sequences of length `r·s` whose `n_d` is
/// at most `budget`, each paired with `n_d`.
fn suitable_sequences(sing: &CuspSingularity, r: usize, budget: i64) -> Vec<(Vec<i64>, usize)> {
    let s = sing.s();
    let len = r * s;
    let mut out = Vec::new();
    let mut d = vec![0i64; len];
    // n_d ≥ Σ(d_i − b_i − 1)^+, which bounds every entry by b_i + budget + 1.
    fn rec(i: usize, spent: i64, d: &mut Vec<i64>, sing: &CuspSingularity, r: usize, budget: i64, out: &mut Vec<(Vec<i64>, usize)>) {
        let s = sing.s();
        if i == d.len() {
            if is_suitable(d)
                && is_nonperiodic(d, s).unwrap()
                && canonical_sequence(d, s).unwrap() == *d
            {
                let nd = n_d(d, sing).unwrap();
                if nd as i64 <= budget {
                    out.push((d.clone(), nd));
                }
            }
            return;
        }
        let b = sing.b[i % s];
        for x in 0..=b + budget + 1 {
            let cost = pos_part(x - b - 1);
            if spent + cost > budget {
                break;
            }
            d[i] = x;
            rec(i + 1, spent + cost, d, sing, r, budget, out);
        }
    }
    rec(0, 0, &mut d, sing, r, budget, &mut out);
    out
}

/// Band families `(d, m)` of the cusp with `m·(r + n_d) = rank`.
fn cusp_bands(sing: &CuspSingularity, rank: usize) -> Vec<CMModuleDescriptor> {
    let s = sing.s();
    let mut out = Vec::new();
    for r in 1..=rank {
        for (d, nd) in suitable_sequences(sing, r, (rank - r) as i64) {
            let base = r + nd;
            if !rank.is_multiple_of(base) {
                continue;
            }
            let lambda_excluded = if d == sing.b { vec![0, 1] } else { vec![0] };
            out.push(CMModuleDescriptor { rank, variant: CMVariant::Band { s, d, m: rank / base, lambda_excluded } });
        }
    }
    out
}

pub fn enumerate_cm_cusp(sing: &CuspSingularity, rank: usize) -> Vec<CMModuleDescriptor> {
    if rank == 0 {
        return Vec::new();
    }
    let mut out = cusp_bands(sing, rank);
    if rank == 1 {
        out.push(CMModuleDescriptor { rank, variant: CMVariant::Ring });
    } else {
        out.push(CMModuleDescriptor { rank, variant: CMVariant::Special { m: rank - 1 } });
    }
    out.sort();
    out
}

fn check_elliptic(r: i64, d: i64, n: i64) -> Result<()> {
    if r < 1 || n < 1 {
        return Err(Error::RangeViolation(format!("need r >= 1 and n >= 1, got r = {r}, n = {n}")));
    }
    if r.gcd(&d) != 1 {
        return Err(Error::NotCoprime { r, d });
    }
    if r > d {
        return Err(Error::RangeViolation(format!("need r <= d, got r = {r}, d = {d}")));
    }
    Ok(())
}

/// Rank `n·(r + (d − b·r)^+)` of `M_{r,d}(nx)`.
pub fn rank_simple_elliptic(r: i64, d: i64, n: i64, sing: &SimpleEllipticSingularity) -> Result<usize> {
    check_elliptic(r, d, n)?;
    Ok((n * (r + pos_part(d - sing.b * r))) as usize)
}

pub fn enumerate_cm_elliptic(sing: &SimpleEllipticSingularity, rank: usize) -> Vec<CMModuleDescriptor> {
    if rank == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let rk = rank as i64;
    for r in 1..=rk {
        for d in r..=sing.b * r + rk - r {
            if r.gcd(&d) != 1 {
                continue;
            }
            let base = r + pos_part(d - sing.b * r);
            if rk % base == 0 {
                let variant = CMVariant::Atiyah { r, deg: d, n: (rk / base) as usize, origin_excluded: r == 1 && d == sing.b };
                out.push(CMModuleDescriptor { rank, variant });
            }
        }
    }
    out.push(CMModuleDescriptor {
        rank,
        variant: if rank == 1 { CMVariant::Ring } else { CMVariant::Special { m: rank - 1 } },
    });
    out.sort();
    out
}

/// `(d_1, d_n, d_{n−1}, …, d_2)`.
pub fn sigma_sequence(d: &[i64]) -> Vec<i64> {
    let mut out = d.to_vec();
    if out.len() > 1 {
        out[1..].reverse();
    }
    out
}

pub fn sigma_act(d: &[i64], m: usize, lambda: &FieldElem, t: usize) -> Result<(Vec<i64>, usize, FieldElem)> {
    if t == 0 || d.is_empty() || !d.len().is_multiple_of(t) {
        return Err(Error::LengthNotMultiple { len: d.len(), s: t });
    }
    let inv = lambda.inv().ok_or(Error::ZeroLambda)?;
    Ok((sigma_sequence(d), m, inv))
}

/// True when `d^σ` is a `t`-shift of `d`; false when the length is not a
/// positive multiple of `t`.
pub fn is_sigma_shift_symmetric(d: &[i64], t: usize) -> bool {
    if t == 0 || d.is_empty() || !d.len().is_multiple_of(t) {
        return false;
    }
    let sd = sigma_sequence(d);
    (0..d.len() / t).any(|k| crate::band::rotate(d, k * t) == sd)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCuspData {
    /// Self-intersection numbers `b_i = −(F_i.F_i)` of the cover's cycle,
    /// `F_1` being the component fixed by σ.
    pub b: Vec<i64>,
}

impl QCuspData {
    pub fn new(b: Vec<i64>) -> Result<QCuspData> {
        CuspSingularity::new(b.clone())?;
        if sigma_sequence(&b) != b {
            return Err(Error::NotSigmaInvariant(b));
        }
        Ok(QCuspData { b })
    }

    pub fn t(&self) -> usize {
        self.b.len()
    }

    pub fn cover(&self) -> CuspSingularity {
        CuspSingularity { b: self.b.clone() }
    }

    pub fn from_json(v: &Value) -> Result<QCuspData> {
        QCuspData::new(int_list(v, "b")?)
    }

    pub fn to_json(&self) -> Value {
        json!({ "t": self.t(), "b": self.b })
    }
}

/// Indecomposable modules of rank `rank` over the invariant ring.
///
/// Restricting a cover module of rank `R` gives rank `2R`; when it splits,
/// each summand has rank `R`. Sequences `d` and `d^σ` give the same
/// restriction, so only the smaller canonical representative is kept.
pub fn enumerate_cm_qcusp(data: &QCuspData, rank: usize) -> Vec<CMModuleDescriptor> {
    if rank == 0 {
        return Vec::new();
    }
    let cover = data.cover();
    let t = data.t();
    let mut out = Vec::new();
    if rank == 1 {
        out.push(CMModuleDescriptor { rank, variant: CMVariant::Ring });
        out.push(CMModuleDescriptor { rank, variant: CMVariant::AntiInvariant });
    }
    let consider = |cover_rank: usize, want_split: bool, out: &mut Vec<CMModuleDescriptor>| {
        for desc in cusp_bands(&cover, cover_rank) {
            let CMVariant::Band { d, m, lambda_excluded, .. } = desc.variant else { continue };
            if canonical_sequence(&sigma_sequence(&d), t).unwrap() < d {
                continue;
            }
            let symmetric = is_sigma_shift_symmetric(&d, t);
            if want_split {
                if symmetric {
                    for lambda in [-1, 1] {
                        if lambda_excluded.contains(&lambda) {
                            continue;
                        }
                        for half in [Half::Prime, Half::DoublePrime] {
                            let variant = CMVariant::SplitBand { s: t, d: d.clone(), m, lambda, half };
                            out.push(CMModuleDescriptor { rank, variant });
                        }
                    }
                }
            } else {
                let mut ex = lambda_excluded;
                if symmetric {
                    ex.extend([-1, 1]);
                }
                ex.sort();
                ex.dedup();
                out.push(CMModuleDescriptor { rank, variant: CMVariant::Band { s: t, d, m, lambda_excluded: ex } });
            }
        }
    };
    consider(rank, true, &mut out);
    if rank.is_multiple_of(2) {
        consider(rank / 2, false, &mut out);
    }
    out.sort();
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn catalog_csv(rows: &[CMModuleDescriptor]) -> String {
    let mut out = String::from("rank,variant,parameters\n");
    for d in rows {
        out.push_str(&format!("{},{},{}\n", d.rank, d.kind(), csv_field(&d.parameters())));
    }
    out
}

pub fn catalog_markdown(rows: &[CMModuleDescriptor]) -> String {
    let mut out = String::from("| rank | variant | parameters |\n|---:|---|---|\n");
    for d in rows {
        out.push_str(&format!("| {} | {} | {} |\n", d.rank, d.kind(), d.parameters().replace('|', "\\|")));
    }
    out
}
