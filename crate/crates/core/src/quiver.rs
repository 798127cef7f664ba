//! Quivers, dimension vectors and the Euler pairings.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector in `N^{Q_0}`, indexed by vertex declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<u32>);

/// Framing vectors live in the same lattice as dimension vectors.
pub type FramingVector = DimVector;

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Componentwise `self <= other`.
    pub fn fits_in(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    pub fn scale(&self, k: u32) -> DimVector {
        DimVector(self.0.iter().map(|a| a * k).collect())
    }

    /// `self / k`, if `k` divides every entry.
    pub fn divide_by(&self, k: u32) -> Option<DimVector> {
        if k == 0 || self.0.iter().any(|a| a % k != 0) {
            return None;
        }
        Some(DimVector(self.0.iter().map(|a| a / k).collect()))
    }

    /// `Σ_i self_i other_i`.
    pub fn dot(&self, other: &DimVector) -> i64 {
        self.0.iter().zip(&other.0).map(|(&a, &b)| a as i64 * b as i64).sum()
    }

    /// Every vector `0 <= v <= self`, in lexicographic order.
    pub fn box_iter(&self) -> BoxIter {
        BoxIter {
            bound: self.0.clone(),
            next: Some(vec![0; self.0.len()]),
        }
    }

    /// Every vector `0 <= v <= self`, sorted by total then lexicographically.
    pub fn graded_box(&self) -> Vec<DimVector> {
        let mut all: Vec<DimVector> = self.box_iter().collect();
        all.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
        all
    }

    pub fn key(&self) -> String {
        self.to_string()
    }

    /// Parses `"1,2,0"`.
    pub fn parse(s: &str) -> Result<DimVector> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(DimVector(Vec::new()));
        }
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad dimension vector `{s}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(DimVector)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl From<Vec<u32>> for DimVector {
    fn from(v: Vec<u32>) -> Self {
        DimVector(v)
    }
}

pub struct BoxIter {
    bound: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for BoxIter {
    type Item = DimVector;

    fn next(&mut self) -> Option<DimVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if succ[i] < self.bound[i] {
                succ[i] += 1;
                for x in succ.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(DimVector(current))
    }
}

/// A finite quiver. Parallel arrows are repeated entries of `arrows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct QuiverFile {
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Quiver> {
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        for &(s, t) in &arrows {
            for x in [s, t] {
                if x >= vertices.len() {
                    return Err(Error::UnknownVertex(format!("#{x}")));
                }
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Builds a quiver from vertex names and arrows given by names.
    pub fn from_names<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S)]) -> Result<Quiver> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownVertex(s.to_string()));
        let arrows = arrows
            .iter()
            .map(|(s, t)| Ok((lookup(s.as_ref())?, lookup(t.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Quiver::new(names, arrows)
    }

    /// The one-vertex quiver with `m` loops.
    pub fn loops(m: usize) -> Quiver {
        Quiver::new(vec!["1".into()], vec![(0, 0); m]).unwrap()
    }

    pub fn jordan() -> Quiver {
        Quiver::loops(1)
    }

    /// `1 -> 2`.
    pub fn a2() -> Quiver {
        Quiver::new(vec!["1".into(), "2".into()], vec![(0, 1)]).unwrap()
    }

    /// `m` parallel arrows `1 -> 2`.
    pub fn kronecker(m: usize) -> Quiver {
        Quiver::new(vec!["1".into(), "2".into()], vec![(0, 1); m]).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Quiver> {
        let file: QuiverFile = serde_json::from_str(s)?;
        let arrows: Vec<(&str, &str)> = file.arrows.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let vertices: Vec<&str> = file.vertices.iter().map(|s| s.as_str()).collect();
        Quiver::from_names(&vertices, &arrows)
    }

    pub fn to_json(&self) -> String {
        let file = QuiverFile {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|&(s, t)| (self.vertices[s].clone(), self.vertices[t].clone()))
                .collect(),
        };
        serde_json::to_string(&file).expect("quiver serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn check_len(&self, d: &DimVector) -> Result<()> {
        if d.len() != self.vertices.len() {
            return Err(Error::VertexMismatch {
                expected: self.vertices.len(),
                found: d.len(),
            });
        }
        Ok(())
    }

    /// Euler form `(d,e) = Σ_i d_i e_i − Σ_a d_{s(a)} e_{t(a)}`.
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> Result<i64> {
        self.check_len(d)?;
        self.check_len(e)?;
        Ok(self.euler(d, e))
    }

    /// Antisymmetrized form `<d,e> = (d,e) − (e,d)`.
    pub fn antisym_form(&self, d: &DimVector, e: &DimVector) -> Result<i64> {
        self.check_len(d)?;
        self.check_len(e)?;
        Ok(self.antisym(d, e))
    }

    // Unchecked variants for vectors already known to match the quiver.
    pub(crate) fn euler(&self, d: &DimVector, e: &DimVector) -> i64 {
        let arrows: i64 = self.arrows.iter().map(|&(s, t)| d.0[s] as i64 * e.0[t] as i64).sum();
        d.dot(e) - arrows
    }

    pub(crate) fn antisym(&self, d: &DimVector, e: &DimVector) -> i64 {
        self.euler(d, e) - self.euler(e, d)
    }

    /// Number of arrows `i -> j` equals the number `j -> i` for every pair.
    pub fn is_symmetric(&self) -> bool {
        let n = self.vertices.len();
        let mut counts = vec![0i64; n * n];
        for &(s, t) in &self.arrows {
            counts[s * n + t] += 1;
        }
        (0..n).all(|i| (0..n).all(|j| counts[i * n + j] == counts[j * n + i]))
    }

    /// Dimension of the representation space `X_d`.
    pub fn rep_space_dim(&self, d: &DimVector) -> u64 {
        self.arrows.iter().map(|&(s, t)| d.0[s] as u64 * d.0[t] as u64).sum()
    }

    /// `dim X_d − dim G_d`, which equals `−(d,d)`.
    pub fn stack_dim(&self, d: &DimVector) -> Result<i64> {
        self.check_len(d)?;
        let gl: i64 = d.0.iter().map(|&x| x as i64 * x as i64).sum();
        Ok(self.rep_space_dim(d) as i64 - gl)
    }

    /// The framed quiver: a new last vertex `∞` with `f_i` arrows `∞ -> i`.
    pub fn framed_quiver(&self, f: &FramingVector) -> Result<Quiver> {
        self.check_len(f)?;
        let mut vertices = self.vertices.clone();
        let mut name = "∞".to_string();
        while vertices.contains(&name) {
            name.push('\'');
        }
        vertices.push(name);
        let inf = self.vertices.len();
        let mut arrows = self.arrows.clone();
        for (i, &fi) in f.0.iter().enumerate() {
            arrows.extend(std::iter::repeat_n((inf, i), fi as usize));
        }
        Quiver::new(vertices, arrows)
    }
}

/// Appends the framing coordinate `δ` to `d` (the `∞` vertex comes last).
pub fn framed_vector(delta: u32, d: &DimVector) -> DimVector {
    let mut v = d.0.clone();
    v.push(delta);
    DimVector(v)
}
