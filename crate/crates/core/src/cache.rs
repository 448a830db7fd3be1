//! On-disk multiplication tables of diagram bases.
//!
//! A table file starts with [`HEADER`], then a key line, then one line per
//! ordered pair of basis diagrams: `a b -> c k`, meaning `a · b = δ^k c`.
//! Files are replaced atomically so a crashed writer never leaves a torn
//! table behind.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::algebra::ScalarMode;
use crate::diagram::{compose_unchecked, enumerate_diagrams, BrauerDiagram};
use crate::Error;

pub const HEADER: &str = "brauerlab-cache v1";
pub const VERSION_TAG: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_MAX_D: usize = 5;

/// `(d, mode, version)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub d: usize,
    pub mode: String,
    pub version: String,
}

impl CacheKey {
    pub fn new(d: usize, mode: &ScalarMode) -> Self {
        let mode = match mode {
            ScalarMode::Generic => "generic".to_string(),
            ScalarMode::Specialized(delta) => format!("delta={delta}"),
        };
        CacheKey { d, mode, version: VERSION_TAG.to_string() }
    }

    fn line(&self) -> String {
        format!("d={} mode={} version={}", self.d, self.mode, self.version)
    }

    pub fn file_name(&self) -> String {
        let mode: String =
            self.mode.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
        format!("mult-d{}-{}-v{}.txt", self.d, mode, self.version)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTable {
    pub key: CacheKey,
    pub basis: Vec<BrauerDiagram>,
    products: Vec<(u32, u8)>,
}

impl MultTable {
    pub fn compute(d: usize, mode: &ScalarMode) -> Result<Self, Error> {
        if d == 0 || d > CACHE_MAX_D {
            return Err(Error::SizeGuard(format!("multiplication tables need 1 <= d <= {CACHE_MAX_D}, got {d}")));
        }
        let basis = enumerate_diagrams(d);
        let index: BTreeMap<&BrauerDiagram, u32> = basis.iter().zip(0..).collect();
        let mut products = Vec::with_capacity(basis.len() * basis.len());
        for a in &basis {
            for b in &basis {
                let (c, k) = compose_unchecked(b, a);
                products.push((index[&c], k as u8));
            }
        }
        Ok(MultTable { key: CacheKey::new(d, mode), basis, products })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `basis[i] · basis[j] = δ^k basis[c]` as `(c, k)`.
    pub fn product(&self, i: usize, j: usize) -> (usize, usize) {
        let (c, k) = self.products[i * self.len() + j];
        (c as usize, k as usize)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{HEADER}\n{}\n", self.key.line());
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                let (c, k) = self.product(i, j);
                writeln!(s, "{} {} -> {} {k}", self.basis[i], self.basis[j], self.basis[c]).unwrap();
            }
        }
        s
    }

    pub fn from_text(text: &str, key: &CacheKey) -> Result<Self, Error> {
        let bad = |msg: String| Error::InvalidInput(format!("cache file: {msg}"));
        let mut lines = text.lines();
        if lines.next() != Some(HEADER) {
            return Err(bad("missing header".into()));
        }
        if lines.next() != Some(key.line().as_str()) {
            return Err(bad("key mismatch".into()));
        }
        let basis = enumerate_diagrams(key.d);
        let index: BTreeMap<BrauerDiagram, u32> = basis.iter().cloned().zip(0..).collect();
        let n = basis.len();
        let mut products = vec![None; n * n];
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [a, b, "->", c, k] = parts.as_slice() else {
                return Err(bad(format!("malformed line {line:?}")));
            };
            let look = |s: &str| -> Result<u32, Error> {
                let x: BrauerDiagram = s.parse()?;
                index.get(&x).copied().ok_or_else(|| bad(format!("diagram {s} not in basis")))
            };
            let (i, j) = (look(a)? as usize, look(b)? as usize);
            let k: u8 = k.parse().map_err(|_| bad(format!("bad loop count in {line:?}")))?;
            products[i * n + j] = Some((look(c)?, k));
        }
        let products = products.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad("incomplete table".into()))?;
        Ok(MultTable { key: key.clone(), basis, products })
    }

    /// Writes next to the final path and renames into place.
    pub fn save(&self, dir: &Path) -> Result<PathBuf, Error> {
        let io = |e: std::io::Error| Error::Io(e.to_string());
        std::fs::create_dir_all(dir).map_err(io)?;
        let path = dir.join(self.key.file_name());
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(self.to_text().as_bytes()).map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(path)
    }

    /// `Ok(None)` when no file exists for this key.
    pub fn load(dir: &Path, d: usize, mode: &ScalarMode) -> Result<Option<Self>, Error> {
        let key = CacheKey::new(d, mode);
        let path = dir.join(key.file_name());
        match std::fs::read_to_string(&path) {
            Ok(text) => Self::from_text(&text, &key).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::Io(e.to_string())),
        }
    }

    /// Returns the table and whether it came from disk.
    pub fn load_or_compute(dir: &Path, d: usize, mode: &ScalarMode) -> Result<(Self, bool), Error> {
        if let Some(t) = Self::load(dir, d, mode)? {
            return Ok((t, true));
        }
        let t = Self::compute(d, mode)?;
        t.save(dir)?;
        Ok((t, false))
    }

    /// Recomputes `samples` random products and counts disagreements.
    pub fn spot_check(&self, samples: usize, seed: u64) -> usize {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = self.len();
        (0..samples)
            .filter(|_| {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                let (c, k) = compose_unchecked(&self.basis[j], &self.basis[i]);
                self.product(i, j) != (self.basis.iter().position(|b| *b == c).unwrap_or(usize::MAX), k)
            })
            .count()
    }
}
