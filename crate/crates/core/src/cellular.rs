//! Cell modules `Δ(λ)` of `Br_d(δ)`, their Gram forms and exact
//! decomposition numbers.
//!
//! A basis vector of `Δ(λ)` is a half diagram on `d` points with `|λ|` free
//! points, tensored with a standard polytabloid of shape `λ`. A diagram acts
//! from below; the free strands it carries are permuted through Young's
//! natural representation, and a vector is killed when two strands get
//! joined.

use std::collections::{BTreeMap, HashMap};

use rug::Rational;

use crate::diagram::{compose_unchecked, double_factorial, enumerate_diagrams, flip, generator, BrauerDiagram, Gen};
use crate::linalg::{subquotient_action, QMat, Subspace};
use crate::numeric::rat_pow;
use crate::report::Check;
use crate::tableau::Partition;
use crate::Error;

pub const DECOMPOSITION_MAX_D: usize = 4;
pub const CELL_MODULE_MAX_D: usize = 6;

const ANCHOR: &str = "cell-modules";

/// `Λ_d` (partitions of `d, d-2, ..`) and the labels `Λ_d^δ` of simples.
#[derive(Clone, Debug)]
pub struct LabelSet {
    pub d: usize,
    pub delta: Rational,
    /// By size descending, then reverse lexicographic (refines dominance).
    pub labels: Vec<Partition>,
    pub delta_labels: Vec<Partition>,
}

pub fn labels(d: usize, delta: &Rational) -> LabelSet {
    let labels: Vec<Partition> = (0..=d).rev().filter(|m| (d - m).is_multiple_of(2)).flat_map(Partition::all).collect();
    let delta_labels = labels.iter().filter(|l| *delta != 0 || !l.is_empty()).cloned().collect();
    LabelSet { d, delta: delta.clone(), labels, delta_labels }
}

/// `C(d, m) (d-m-1)!! f^λ`
pub fn cell_dimension(lambda: &Partition, d: usize) -> u64 {
    let m = lambda.size();
    if m > d || (d - m) % 2 == 1 {
        return 0;
    }
    let binom: u64 = (0..m as u64).fold(1, |acc, i| acc * (d as u64 - i) / (i + 1));
    binom * double_factorial((d - m).saturating_sub(1) as u64) * lambda.standard_count()
}

/// Arcs and free points on `d` points in a row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfDiagram {
    partner: Vec<Option<usize>>,
}

impl HalfDiagram {
    /// All half diagrams with `arcs` arcs, lexicographic.
    pub fn all(d: usize, arcs: usize) -> Vec<HalfDiagram> {
        fn rec(cur: &mut Vec<Option<Option<usize>>>, arcs: usize, free: usize, out: &mut Vec<HalfDiagram>) {
            let Some(i) = cur.iter().position(Option::is_none) else {
                out.push(HalfDiagram { partner: cur.iter().map(|x| x.unwrap()).collect() });
                return;
            };
            if free > 0 {
                cur[i] = Some(None);
                rec(cur, arcs, free - 1, out);
            }
            if arcs > 0 {
                for j in i + 1..cur.len() {
                    if cur[j].is_none() {
                        cur[i] = Some(Some(j));
                        cur[j] = Some(Some(i));
                        rec(cur, arcs - 1, free, out);
                        cur[j] = None;
                    }
                }
            }
            cur[i] = None;
        }
        if 2 * arcs > d {
            return Vec::new();
        }
        let mut out = Vec::new();
        rec(&mut vec![None; d], arcs, d - 2 * arcs, &mut out);
        out.sort();
        out
    }

    pub fn d(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        self.partner[i]
    }

    pub fn free_points(&self) -> Vec<usize> {
        (0..self.d()).filter(|&i| self.partner[i].is_none()).collect()
    }

    /// Glue `x` below: returns the new half diagram, the closed loops, and
    /// `w` with `w[j]` the new position of strand `j`. `None` when two
    /// strands are joined.
    pub fn act(&self, x: &BrauerDiagram) -> Option<(HalfDiagram, usize, Vec<usize>)> {
        let d = self.d();
        let rank: BTreeMap<usize, usize> = self.free_points().into_iter().enumerate().map(|(j, p)| (p, j)).collect();
        let mut partner = vec![None; d];
        let mut strand = vec![None; d];
        let mut done = vec![false; d];
        let mut seen = vec![false; d];
        for p in 0..d {
            if done[p] {
                continue;
            }
            done[p] = true;
            let mut q = x.partner(p);
            loop {
                if q < d {
                    partner[p] = Some(q);
                    partner[q] = Some(p);
                    done[q] = true;
                    break;
                }
                let i = q - d;
                seen[i] = true;
                match self.partner[i] {
                    None => {
                        strand[p] = Some(rank[&i]);
                        break;
                    }
                    Some(i2) => {
                        seen[i2] = true;
                        q = x.partner(d + i2);
                    }
                }
            }
        }
        let free_new = strand.iter().filter(|s| s.is_some()).count();
        if free_new < rank.len() {
            return None;
        }
        // closed loops: unseen arcs of self joined through top arcs of x
        let mut loops = 0;
        for i in 0..d {
            if seen[i] {
                continue;
            }
            loops += 1;
            let mut j = i;
            loop {
                seen[j] = true;
                let j2 = self.partner[j].expect("free points are always reached");
                seen[j2] = true;
                j = x.partner(d + j2) - d;
                if seen[j] {
                    break;
                }
            }
        }
        let mut w = vec![0; rank.len()];
        for (k, s) in strand.iter().flatten().enumerate() {
            w[*s] = k;
        }
        Some((HalfDiagram { partner }, loops, w))
    }

    /// Pair two half diagrams along their points: closed loops and `w` with
    /// strand `j` of `other` meeting strand `w[j]` of `self`, or `None` when
    /// two free points of the same side meet.
    pub fn pair(&self, other: &HalfDiagram) -> Option<(usize, Vec<usize>)> {
        let d = self.d();
        let rank_a: BTreeMap<usize, usize> = self.free_points().into_iter().enumerate().map(|(j, p)| (p, j)).collect();
        let rank_b: BTreeMap<usize, usize> = other.free_points().into_iter().enumerate().map(|(j, p)| (p, j)).collect();
        if rank_a.len() != rank_b.len() {
            return None;
        }
        let mut seen = vec![false; d];
        let mut w = vec![0; rank_b.len()];
        for (&p, &ja) in &rank_a {
            // walk from a free point of self through other, self, other, ..
            let mut i = p;
            seen[i] = true;
            loop {
                match other.partner[i] {
                    None => {
                        w[rank_b[&i]] = ja;
                        break;
                    }
                    Some(i2) => {
                        seen[i2] = true;
                        let i3 = self.partner[i2]?;
                        seen[i3] = true;
                        i = i3;
                    }
                }
            }
        }
        let mut loops = 0;
        for i in 0..d {
            if seen[i] {
                continue;
            }
            if self.partner[i].is_none() || other.partner[i].is_none() {
                return None;
            }
            loops += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                let j2 = other.partner[j].unwrap();
                seen[j2] = true;
                j = self.partner[j2].unwrap();
            }
        }
        Some((loops, w))
    }
}

/// Young's natural representation of `S_m` on standard polytabloids.
#[derive(Clone, Debug)]
struct Specht {
    /// `rows[t][r]` lists the entries of row `r` of standard tableau `t`.
    tableaux: Vec<Vec<Vec<usize>>>,
    /// Inverse of the restriction of the polytabloid matrix to the rows of
    /// the standard tabloids.
    pinv: QMat,
    keys: Vec<Vec<u8>>,
    /// Tabloid inner product on the polytabloid basis.
    form: QMat,
    cache: HashMap<Vec<usize>, QMat>,
}

fn standard_tableaux(shape: &Partition) -> Vec<Vec<Vec<usize>>> {
    let m = shape.size();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<usize>> = shape.parts().iter().map(|_| Vec::new()).collect();
    fn rec(k: usize, m: usize, shape: &Partition, rows: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == m {
            out.push(rows.clone());
            return;
        }
        for r in 0..rows.len() {
            let len = rows[r].len();
            if len < shape.row(r + 1) && (r == 0 || rows[r - 1].len() > len) {
                rows[r].push(k);
                rec(k + 1, m, shape, rows, out);
                rows[r].pop();
            }
        }
    }
    rec(0, m, shape, &mut rows, &mut out);
    out
}

fn tabloid_key(rows: &[Vec<usize>], m: usize) -> Vec<u8> {
    let mut key = vec![0u8; m];
    for (r, row) in rows.iter().enumerate() {
        for &x in row {
            key[x] = r as u8;
        }
    }
    key
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Polytabloid of a (not necessarily standard) tableau, sparse over tabloids.
fn polytabloid(rows: &[Vec<usize>], m: usize) -> BTreeMap<Vec<u8>, i64> {
    let width = rows.first().map_or(0, Vec::len);
    let columns: Vec<Vec<usize>> =
        (0..width).map(|c| rows.iter().filter(|r| r.len() > c).map(|r| r[c]).collect()).collect();
    let mut out = BTreeMap::new();
    let mut key = vec![0u8; m];
    fn rec(c: usize, columns: &[Vec<usize>], sgn: i32, key: &mut Vec<u8>, out: &mut BTreeMap<Vec<u8>, i64>) {
        if c == columns.len() {
            *out.entry(key.clone()).or_insert(0) += sgn as i64;
            return;
        }
        let col = &columns[c];
        for p in permutations(col.len()) {
            for (i, &x) in col.iter().enumerate() {
                key[x] = p[i] as u8;
            }
            rec(c + 1, columns, sgn * sign(&p), key, out);
        }
    }
    rec(0, &columns, 1, &mut key, &mut out);
    out.retain(|_, v| *v != 0);
    out
}

impl Specht {
    fn new(shape: &Partition) -> Specht {
        let m = shape.size();
        let tableaux = standard_tableaux(shape);
        let keys: Vec<Vec<u8>> = tableaux.iter().map(|t| tabloid_key(t, m)).collect();
        let polys: Vec<BTreeMap<Vec<u8>, i64>> = tableaux.iter().map(|t| polytabloid(t, m)).collect();
        let f = tableaux.len();
        let mut p = QMat::zeros(f, f);
        for (j, poly) in polys.iter().enumerate() {
            for (i, k) in keys.iter().enumerate() {
                p[(i, j)] = Rational::from(*poly.get(k).unwrap_or(&0));
            }
        }
        let pinv = p.inverse().expect("standard polytabloids are independent on standard tabloids");
        let mut form = QMat::zeros(f, f);
        for i in 0..f {
            for j in 0..f {
                let s: i64 = polys[i].iter().map(|(k, v)| v * polys[j].get(k).unwrap_or(&0)).sum();
                form[(i, j)] = Rational::from(s);
            }
        }
        Specht { tableaux, pinv, keys, form, cache: HashMap::new() }
    }

    fn dim(&self) -> usize {
        self.tableaux.len()
    }

    /// Matrix of the permutation moving entry `j` to `w[j]`.
    fn rho(&mut self, w: &[usize]) -> QMat {
        if let Some(m) = self.cache.get(w) {
            return m.clone();
        }
        let f = self.dim();
        let m = w.len();
        let mut out = QMat::zeros(f, f);
        for (j, t) in self.tableaux.iter().enumerate() {
            let moved: Vec<Vec<usize>> = t.iter().map(|row| row.iter().map(|&x| w[x]).collect()).collect();
            let poly = polytabloid(&moved, m);
            let v: Vec<Rational> = self.keys.iter().map(|k| Rational::from(*poly.get(k).unwrap_or(&0))).collect();
            let c = self.pinv.apply(&v);
            for (i, x) in c.into_iter().enumerate() {
                out[(i, j)] = x;
            }
        }
        self.cache.insert(w.to_vec(), out.clone());
        out
    }
}

/// `Δ(λ)` with the matrices of the generators.
#[derive(Clone, Debug)]
pub struct CellModule {
    pub label: Partition,
    pub d: usize,
    pub delta: Rational,
    pub halves: Vec<HalfDiagram>,
    specht: Specht,
    /// `t[i-1]`, `g[i-1]` act on the basis `(half, tableau)` in row-major
    /// order.
    pub t: Vec<QMat>,
    pub g: Vec<QMat>,
}

impl CellModule {
    pub fn dim(&self) -> usize {
        self.halves.len() * self.specht.dim()
    }

    pub fn tableau_count(&self) -> usize {
        self.specht.dim()
    }

    /// Matrix of a single diagram.
    pub fn action(&mut self, x: &BrauerDiagram) -> QMat {
        let f = self.specht.dim();
        let n = self.dim();
        let index: BTreeMap<&HalfDiagram, usize> = self.halves.iter().enumerate().map(|(i, h)| (h, i)).collect();
        let mut out = QMat::zeros(n, n);
        let halves = self.halves.clone();
        for (hi, h) in halves.iter().enumerate() {
            let Some((h2, loops, w)) = h.act(x) else { continue };
            let scale = rat_pow(&self.delta, loops);
            if scale == 0 {
                continue;
            }
            let r = self.specht.rho(&w);
            let hj = index[&h2];
            for a in 0..f {
                for b in 0..f {
                    if r[(a, b)] != 0 {
                        out[(hj * f + a, hi * f + b)] = Rational::from(&r[(a, b)] * &scale);
                    }
                }
            }
        }
        out
    }

    /// Cellular bilinear form.
    pub fn gram(&mut self) -> QMat {
        let f = self.specht.dim();
        let n = self.dim();
        let mut out = QMat::zeros(n, n);
        let halves = self.halves.clone();
        let form = self.specht.form.clone();
        for (i, a) in halves.iter().enumerate() {
            for (j, b) in halves.iter().enumerate() {
                let Some((loops, w)) = a.pair(b) else { continue };
                let scale = rat_pow(&self.delta, loops);
                if scale == 0 {
                    continue;
                }
                let m = form.mul(&self.specht.rho(&w));
                for x in 0..f {
                    for y in 0..f {
                        out[(i * f + x, j * f + y)] = Rational::from(&m[(x, y)] * &scale);
                    }
                }
            }
        }
        out
    }
}

pub fn cell_module(lambda: &Partition, d: usize, delta: &Rational) -> Result<CellModule, Error> {
    let m = lambda.size();
    if m > d || (d - m) % 2 == 1 {
        return Err(Error::InvalidInput(format!("{lambda} is not a label for d = {d}")));
    }
    if d > CELL_MODULE_MAX_D {
        return Err(Error::SizeGuard(format!("cell modules need d <= {CELL_MODULE_MAX_D}, got {d}")));
    }
    let mut module = CellModule {
        label: lambda.clone(),
        d,
        delta: delta.clone(),
        halves: HalfDiagram::all(d, (d - m) / 2),
        specht: Specht::new(lambda),
        t: Vec::new(),
        g: Vec::new(),
    };
    for i in 1..d {
        let t = module.action(&generator(Gen::T, i, d)?);
        let g = module.action(&generator(Gen::G, i, d)?);
        module.t.push(t);
        module.g.push(g);
    }
    Ok(module)
}

pub fn gram_rank(lambda: &Partition, d: usize, delta: &Rational) -> Result<(QMat, usize), Error> {
    let g = cell_module(lambda, d, delta)?.gram();
    let r = g.rank();
    Ok((g, r))
}

/// Every defining relation on the generator matrices of a cell module.
pub fn verify_cell_relations(module: &CellModule) -> Vec<Check> {
    let d = module.d;
    let (t, g) = (&module.t, &module.g);
    let one = QMat::identity(module.dim());
    let delta = &module.delta;
    let mut fails: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();
    let mut rec = |name: &'static str, ok: bool| {
        let e = fails.entry(name).or_insert((0, 0));
        e.0 += 1;
        e.1 += usize::from(!ok);
    };
    for i in 0..d.saturating_sub(1) {
        rec("t_i^2 = 1", t[i].mul(&t[i]) == one);
        rec("g_i^2 = delta g_i", g[i].mul(&g[i]) == g[i].scale(delta));
        rec("t_i g_i = g_i", t[i].mul(&g[i]) == g[i]);
        rec("g_i t_i = g_i", g[i].mul(&t[i]) == g[i]);
        for j in 0..d - 1 {
            if i.abs_diff(j) > 1 {
                rec("t_i t_j = t_j t_i", t[i].mul(&t[j]) == t[j].mul(&t[i]));
                rec("g_i g_j = g_j g_i", g[i].mul(&g[j]) == g[j].mul(&g[i]));
                rec("g_i t_j = t_j g_i", g[i].mul(&t[j]) == t[j].mul(&g[i]));
            }
            if i.abs_diff(j) == 1 {
                rec("g_i t_j g_i = g_i", g[i].mul(&t[j]).mul(&g[i]) == g[i]);
                rec("g_i g_j g_i = g_i", g[i].mul(&g[j]).mul(&g[i]) == g[i]);
            }
        }
        if i + 2 < d {
            let j = i + 1;
            rec("t_i t_i+1 t_i = t_i+1 t_i t_i+1", t[i].mul(&t[j]).mul(&t[i]) == t[j].mul(&t[i]).mul(&t[j]));
            rec("t_i g_i+1 g_i = t_i+1 g_i", t[i].mul(&g[j]).mul(&g[i]) == t[j].mul(&g[i]));
            rec("t_i+1 g_i g_i+1 = t_i g_i+1", t[j].mul(&g[i]).mul(&g[j]) == t[i].mul(&g[j]));
        }
    }
    fails
        .into_iter()
        .map(|(name, (total, bad))| {
            Check::exact(format!("{name} on cell module {}", module.label), ANCHOR, bad == 0)
                .with_detail(format!("{total} instances, {bad} failed"))
        })
        .collect()
}

/// Trace of left multiplication by each diagram on `Br_d(δ)`.
fn regular_traces(diagrams: &[BrauerDiagram], delta: &Rational) -> BTreeMap<BrauerDiagram, Rational> {
    let mut out = BTreeMap::new();
    for x in diagrams {
        let mut tr = Rational::new();
        for b in diagrams {
            let (c, k) = compose_unchecked(b, x);
            if &c == b {
                tr += rat_pow(delta, k);
            }
        }
        out.insert(x.clone(), tr);
    }
    out
}

/// Basis of the Jacobson radical of `Br_d(δ)` in diagram coordinates:
/// the kernel of `(a, b) -> tr(L_(ab))`.
pub fn radical_basis(d: usize, delta: &Rational) -> Result<(Vec<BrauerDiagram>, Vec<Vec<Rational>>), Error> {
    if d > DECOMPOSITION_MAX_D {
        return Err(Error::SizeGuard(format!("radical needs d <= {DECOMPOSITION_MAX_D}, got {d}")));
    }
    let diagrams = enumerate_diagrams(d);
    let tr = regular_traces(&diagrams, delta);
    let n = diagrams.len();
    let mut form = QMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (c, k) = compose_unchecked(&diagrams[j], &diagrams[i]);
            form[(i, j)] = Rational::from(&tr[&c] * &rat_pow(delta, k));
        }
    }
    let kernel = form.kernel();
    Ok((diagrams, kernel))
}

/// `[Δ(λ) : L(μ)]`, also split by radical layers `rad^i Δ / rad^(i+1) Δ`.
#[derive(Clone, Debug)]
pub struct DecompositionTable {
    pub d: usize,
    pub delta: Rational,
    pub rows: Vec<Partition>,
    pub cols: Vec<Partition>,
    pub entries: Vec<Vec<u64>>,
    /// `layers[r][i][c]`: multiplicity of `L(cols[c])` in layer `i` of
    /// `Δ(rows[r])`.
    pub layers: Vec<Vec<Vec<u64>>>,
    pub radical_dim: usize,
    pub simple_dims: Vec<usize>,
}

impl DecompositionTable {
    pub fn get(&self, lambda: &Partition, mu: &Partition) -> Option<u64> {
        let r = self.rows.iter().position(|x| x == lambda)?;
        let c = self.cols.iter().position(|x| x == mu)?;
        Some(self.entries[r][c])
    }

    /// Diagonal ones and nonzero entries only at `μ` not after `λ`.
    pub fn is_unitriangular(&self) -> bool {
        self.rows.iter().enumerate().all(|(r, lambda)| {
            self.cols.iter().enumerate().all(|(c, mu)| {
                let v = self.entries[r][c];
                let cpos = self.rows.iter().position(|x| x == mu).unwrap();
                if mu == lambda {
                    v == 1
                } else {
                    v == 0 || cpos < r
                }
            })
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda");
        for mu in &self.cols {
            s.push_str(&format!(",{mu}"));
        }
        s.push('\n');
        for (r, lambda) in self.rows.iter().enumerate() {
            s.push_str(&lambda.to_string());
            for v in &self.entries[r] {
                s.push_str(&format!(",{v}"));
            }
            s.push('\n');
        }
        s
    }
}

fn traces(ops: &[QMat]) -> Vec<Rational> {
    ops.iter().map(|m| (0..m.rows()).fold(Rational::new(), |acc, i| acc + &m[(i, i)])).collect()
}

pub fn decomposition_numbers(d: usize, delta: &Rational) -> Result<DecompositionTable, Error> {
    if d > DECOMPOSITION_MAX_D {
        return Err(Error::SizeGuard(format!("decomposition numbers need d <= {DECOMPOSITION_MAX_D}, got {d}")));
    }
    let ls = labels(d, delta);
    let (diagrams, radical) = radical_basis(d, delta)?;
    let mut modules: Vec<CellModule> = ls.labels.iter().map(|l| cell_module(l, d, delta)).collect::<Result<_, _>>()?;
    let actions: Vec<Vec<QMat>> =
        modules.iter_mut().map(|m| diagrams.iter().map(|x| m.action(x)).collect()).collect();

    // characters of the simples L(μ) = Δ(μ) / rad of the form
    let mut simple_chars = Vec::new();
    let mut simple_dims = Vec::new();
    for mu in &ls.delta_labels {
        let i = ls.labels.iter().position(|l| l == mu).unwrap();
        let gram = modules[i].gram();
        let n = gram.rows();
        let kernel = Subspace::span(n, gram.kernel());
        let whole = Subspace::span(n, (0..n).map(|j| unit(n, j)));
        let ops = subquotient_action(&actions[i], &whole, &kernel);
        simple_dims.push(n - kernel.dim());
        simple_chars.push(traces(&ops));
    }
    let mut char_mat = QMat::zeros(diagrams.len(), simple_chars.len());
    for (c, ch) in simple_chars.iter().enumerate() {
        for (r, x) in ch.iter().enumerate() {
            char_mat[(r, c)] = x.clone();
        }
    }
    if char_mat.rank() != simple_chars.len() {
        return Err(Error::Degenerate("characters of the simple modules are dependent".into()));
    }

    let mut entries = Vec::new();
    let mut layers = Vec::new();
    for (i, module) in modules.iter().enumerate() {
        let n = module.dim();
        let rad_ops: Vec<QMat> = radical
            .iter()
            .map(|coef| {
                let mut m = QMat::zeros(n, n);
                for (c, a) in coef.iter().zip(&actions[i]) {
                    if *c != 0 {
                        m = m.add(&a.scale(c));
                    }
                }
                m
            })
            .collect();
        let mut cur = Subspace::span(n, (0..n).map(|j| unit(n, j)));
        let mut row_layers = Vec::new();
        let mut total = vec![0u64; simple_chars.len()];
        while cur.dim() > 0 {
            let next = Subspace::span(n, cur.basis().iter().flat_map(|v| rad_ops.iter().map(move |r| r.apply(v))));
            let ch = traces(&subquotient_action(&actions[i], &cur, &next));
            let mult = char_mat.solve(&ch).ok_or_else(|| {
                Error::Degenerate(format!("layer of cell module {} is not a sum of simples", module.label))
            })?;
            let mut layer = Vec::with_capacity(mult.len());
            for (c, x) in mult.iter().enumerate() {
                if *x.denom() != 1 || *x < 0 {
                    return Err(Error::Degenerate(format!("non-integral multiplicity {x} in {}", module.label)));
                }
                let v = x.numer().to_u64().unwrap();
                total[c] += v;
                layer.push(v);
            }
            row_layers.push(layer);
            cur = next;
        }
        entries.push(total);
        layers.push(row_layers);
    }
    Ok(DecompositionTable {
        d,
        delta: delta.clone(),
        rows: ls.labels,
        cols: ls.delta_labels,
        entries,
        layers,
        radical_dim: radical.len(),
        simple_dims,
    })
}

fn unit(n: usize, j: usize) -> Vec<Rational> {
    let mut v = vec![Rational::new(); n];
    v[j] = Rational::from(1);
    v
}

/// `Σ_λ dim Δ(λ)^2 = (2d-1)!!`, by the closed formula for `dim Δ(λ)`.
pub fn cell_dimension_identity(d: usize) -> (u64, u64) {
    let sum = labels(d, &Rational::from(1)).labels.iter().map(|l| cell_dimension(l, d).pow(2)).sum();
    (sum, double_factorial((2 * d as u64).saturating_sub(1)))
}

/// Checks the cellular form is invariant, `<x a, b> = <a, x* b>`, for every
/// diagram `x`.
pub fn form_is_invariant(module: &mut CellModule) -> bool {
    let g = module.gram();
    enumerate_diagrams(module.d).iter().all(|x| {
        let a = module.action(x);
        let b = module.action(&flip(x));
        a.transpose().mul(&g) == g.mul(&b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn label_sets() {
        let l = labels(2, &q(1));
        assert_eq!(l.labels, vec![p("(2)"), p("(1,1)"), Partition::empty()]);
        assert_eq!(labels(2, &q(0)).delta_labels, vec![p("(2)"), p("(1,1)")]);
        assert_eq!(labels(3, &q(0)).labels, vec![p("(3)"), p("(2,1)"), p("(1,1,1)"), p("(1)")]);
        assert_eq!(labels(3, &q(0)).delta_labels.len(), 4);
    }

    #[test]
    fn dimensions() {
        assert_eq!(cell_dimension(&Partition::empty(), 2), 1);
        assert_eq!(cell_dimension(&p("(1)"), 3), 3);
        assert_eq!(cell_dimension(&p("(2,1)"), 3), 2);
        for d in 1..=7 {
            let (sum, want) = cell_dimension_identity(d);
            assert_eq!(sum, want, "d={d}");
        }
        for d in 1..=5 {
            for l in labels(d, &q(1)).labels {
                let m = cell_module(&l, d, &q(1)).unwrap();
                assert_eq!(m.dim() as u64, cell_dimension(&l, d), "d={d} {l}");
            }
        }
    }

    #[test]
    fn sign_module() {
        let m = cell_module(&p("(1,1)"), 2, &q(3)).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.t[0], QMat::from_i64(&[&[-1]]));
    }

    #[test]
    fn relations_and_invariance() {
        for d in 1..=4 {
            for delta in [q(-2), q(-1), q(0), q(1), q(2), q(3), Rational::from((1, 2))] {
                for l in labels(d, &delta).labels {
                    let mut m = cell_module(&l, d, &delta).unwrap();
                    for c in verify_cell_relations(&m) {
                        assert!(c.passed(), "d={d} delta={delta} {l}: {c:?}");
                    }
                    if d <= 3 {
                        assert!(form_is_invariant(&mut m), "d={d} delta={delta} {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn gram_examples() {
        let (g, r) = gram_rank(&Partition::empty(), 2, &q(0)).unwrap();
        assert_eq!((g, r), (QMat::from_i64(&[&[0]]), 0));
        assert_eq!(gram_rank(&Partition::empty(), 2, &q(5)).unwrap().1, 1);
        for d in 1..=4 {
            let delta = q(d as i64 + 1);
            for l in labels(d, &delta).labels {
                let (g, r) = gram_rank(&l, d, &delta).unwrap();
                assert_eq!(r, g.rows(), "d={d} {l}");
            }
        }
    }

    #[test]
    fn half_delta_is_semisimple() {
        let half = Rational::from((1, 2));
        for d in 1..=4 {
            for l in labels(d, &half).labels {
                let (g, r) = gram_rank(&l, d, &half).unwrap();
                assert_eq!(r, g.rows(), "d={d} {l}");
            }
        }
    }

    #[test]
    fn decomposition_small() {
        let t = decomposition_numbers(2, &q(3)).unwrap();
        assert_eq!(t.entries, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(t.radical_dim, 0);
        let t = decomposition_numbers(2, &q(0)).unwrap();
        assert_eq!(t.radical_dim, 1);
        assert_eq!(t.get(&Partition::empty(), &p("(2)")), Some(1));
        assert_eq!(t.get(&Partition::empty(), &p("(1,1)")), Some(0));
        assert!(t.is_unitriangular());
        for d in 1..=3 {
            for delta in -2..=3 {
                let t = decomposition_numbers(d, &q(delta)).unwrap();
                assert!(t.is_unitriangular(), "d={d} delta={delta}: {t:?}");
                // dim Δ(λ) = Σ_μ [Δ(λ):L(μ)] dim L(μ)
                for (r, l) in t.rows.iter().enumerate() {
                    let s: u64 = t.entries[r].iter().zip(&t.simple_dims).map(|(a, b)| a * *b as u64).sum();
                    assert_eq!(s, cell_dimension(l, d));
                }
            }
        }
    }

    #[test]
    fn semisimplicity_pattern_d3() {
        // radical is nonzero exactly at delta in {-2, 1} for d = 3 among -2..3
        let bad: Vec<i64> = (-2..=3).filter(|&x| decomposition_numbers(3, &q(x)).unwrap().radical_dim > 0).collect();
        assert_eq!(bad, vec![-2, 1]);
    }
}
