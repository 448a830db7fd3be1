//! Brauer diagrams: perfect matchings on `2d` points.
//!
//! Bottom points are `0..d` and top points `d..2d`, both left to right.

use std::fmt;
use std::str::FromStr;

use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerDiagram {
    pairing: Vec<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    T,
    G,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

impl BrauerDiagram {
    pub fn from_pairing(pairing: Vec<usize>) -> Result<Self, Error> {
        let n = pairing.len();
        if n == 0 || n % 2 == 1 || n > 2 * u8::MAX as usize {
            return Err(Error::InvalidInput(format!("pairing of length {n}")));
        }
        for (i, &j) in pairing.iter().enumerate() {
            if j >= n || j == i || pairing[j] != i {
                return Err(Error::InvalidInput(format!("not a fixed-point-free involution at {i}")));
            }
        }
        Ok(BrauerDiagram { pairing: pairing.into_iter().map(|j| j as u8).collect() })
    }

    fn from_raw(pairing: Vec<u8>) -> Self {
        BrauerDiagram { pairing }
    }

    pub fn identity(d: usize) -> Self {
        let mut p = vec![0u8; 2 * d];
        for i in 0..d {
            p[i] = (i + d) as u8;
            p[i + d] = i as u8;
        }
        Self::from_raw(p)
    }

    pub fn d(&self) -> usize {
        self.pairing.len() / 2
    }

    pub fn partner(&self, i: usize) -> usize {
        self.pairing[i] as usize
    }

    pub fn pairing(&self) -> Vec<usize> {
        self.pairing.iter().map(|&j| j as usize).collect()
    }

    /// Number of strands joining the bottom row to the top row.
    pub fn propagating(&self) -> usize {
        let d = self.d();
        (0..d).filter(|&i| self.partner(i) >= d).count()
    }

    pub fn is_permutation(&self) -> bool {
        self.propagating() == self.d()
    }
}

impl fmt::Display for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j) in self.pairing.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for BrauerDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let pairing = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidInput(format!("bad pairing {s:?}: {e}")))?;
        Self::from_pairing(pairing)
    }
}

/// Stack `upper` on top of `lower` and remove closed loops.
///
/// Returns the resulting diagram and the number of loops removed.
pub fn compose(upper: &BrauerDiagram, lower: &BrauerDiagram) -> Result<(BrauerDiagram, usize), Error> {
    let d = lower.d();
    if upper.d() != d {
        return Err(Error::SizeMismatch(upper.d(), d));
    }
    Ok(compose_unchecked(upper, lower))
}

pub(crate) fn compose_unchecked(upper: &BrauerDiagram, lower: &BrauerDiagram) -> (BrauerDiagram, usize) {
    let d = lower.d();
    // nodes: lower bottom 0..d, middle d..2d, upper top 2d..3d;
    // upper's own index u lands on node d + u
    let mut uf = UnionFind::new(3 * d);
    for i in 0..2 * d {
        uf.union(i, lower.partner(i));
        uf.union(d + i, d + upper.partner(i));
    }
    let mut end_of_root = vec![usize::MAX; 3 * d];
    let mut out = vec![0u8; 2 * d];
    let endpoints = (0..d).chain(2 * d..3 * d);
    for node in endpoints {
        let out_idx = if node < d { node } else { node - d };
        let r = uf.find(node);
        let other = end_of_root[r];
        if other == usize::MAX {
            end_of_root[r] = out_idx;
        } else {
            out[out_idx] = other as u8;
            out[other] = out_idx as u8;
        }
    }
    let mut loops = 0;
    let mut seen = vec![false; 3 * d];
    for node in d..2 * d {
        let r = uf.find(node);
        if !seen[r] {
            seen[r] = true;
            if end_of_root[r] == usize::MAX {
                loops += 1;
            }
        }
    }
    (BrauerDiagram::from_raw(out), loops)
}

pub fn generator(kind: Gen, i: usize, d: usize) -> Result<BrauerDiagram, Error> {
    if i < 1 || i + 1 > d {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: d.saturating_sub(1) });
    }
    let mut p: Vec<u8> = BrauerDiagram::identity(d).pairing;
    let (a, b) = (i - 1, i);
    match kind {
        Gen::T => {
            p[a] = (d + b) as u8;
            p[d + b] = a as u8;
            p[b] = (d + a) as u8;
            p[d + a] = b as u8;
        }
        Gen::G => {
            p[a] = b as u8;
            p[b] = a as u8;
            p[d + a] = (d + b) as u8;
            p[d + b] = (d + a) as u8;
        }
    }
    Ok(BrauerDiagram::from_raw(p))
}

/// All diagrams on `2d` points in lexicographic order of the pairing.
pub fn enumerate_diagrams(d: usize) -> Vec<BrauerDiagram> {
    let n = 2 * d;
    let mut out = Vec::with_capacity(double_factorial((2 * d as u64).saturating_sub(1)) as usize);
    let mut cur = vec![u8::MAX; n];
    fn rec(cur: &mut Vec<u8>, out: &mut Vec<BrauerDiagram>) {
        let Some(i) = cur.iter().position(|&x| x == u8::MAX) else {
            out.push(BrauerDiagram::from_raw(cur.clone()));
            return;
        };
        for j in i + 1..cur.len() {
            if cur[j] == u8::MAX {
                cur[i] = j as u8;
                cur[j] = i as u8;
                rec(cur, out);
                cur[j] = u8::MAX;
            }
        }
        cur[i] = u8::MAX;
    }
    if d > 0 {
        rec(&mut cur, &mut out);
    }
    out
}

/// Reflects the diagram top to bottom.
pub fn flip(b: &BrauerDiagram) -> BrauerDiagram {
    let n = b.pairing.len();
    let d = n / 2;
    let f = |i: usize| (i + d) % n;
    let mut p = vec![0u8; n];
    for i in 0..n {
        p[f(i)] = f(b.partner(i)) as u8;
    }
    BrauerDiagram::from_raw(p)
}

pub fn double_factorial(n: u64) -> u64 {
    (1..=n).rev().step_by(2).product()
}
