//! Seminormal matrix model of the level-2 cyclotomic VW-algebra.
//!
//! The basis is the set of up-down bitableaux. Each `y_k` is diagonal. Each
//! `s_k`, `e_k` is block diagonal, with blocks made of paths that agree
//! everywhere except at the shape `Y_k`. A block whose outer shapes coincide
//! carries a rank one `e_k = gamma gamma^T`. Every other block is `e`-free,
//! and on it `s_k` is the familiar 1x1 or 2x2 Young block.
//!
//! Entries are kept symbolic (a rational times principal square roots of
//! rationals) until the final conversion to floats.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::Rational;
use serde_json::{json, Value};

use crate::linalg::{rel_residual, CMat};
use crate::numeric::{principal_sqrt, AppComplex, Precision};
use crate::report::{worst_by_name, Check};
use crate::tableau::{eigenvalue_sequence, enumerate_updown, CycloParams, DoubleYoungDiagram, UpDownBitableau};
use crate::Error;

pub const SEMINORMAL_MAX_D: usize = 4;

const ANCHOR: &str = "vw-relations";
const SEARCH_BITS: u32 = 96;
const SEARCH_TOL: f64 = 1e-18;
const BLOW_UP: f64 = 1e10;

pub fn build_params(d: usize, delta: &Rational, n: Option<usize>) -> Result<CycloParams, Error> {
    CycloParams::new(d, n.unwrap_or(2 * d), delta.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// One path, `s_k = +-1`.
    Single,
    /// Two paths swapping the order of two boxes.
    Pair,
    /// `Y_{k-1} = Y_{k+1}`; `e_k` lives here.
    Cup,
}

#[derive(Clone, Debug)]
pub struct Block {
    /// 1-based generator index.
    pub k: usize,
    pub kind: BlockKind,
    pub members: Vec<usize>,
}

impl Block {
    fn sign_vars(&self) -> usize {
        match self.kind {
            BlockKind::Single => 0,
            BlockKind::Pair => 1,
            BlockKind::Cup => self.members.len() - 1,
        }
    }
}

/// `coef * prod sqrt(roots)`, principal branch for each root.
#[derive(Clone, Debug)]
struct Entry {
    coef: Rational,
    roots: Vec<Rational>,
}

impl Entry {
    fn rat(q: Rational) -> Self {
        Entry { coef: q, roots: Vec::new() }
    }

    fn eval(&self, prec: u32) -> AppComplex {
        let mut z = AppComplex::from_rational(&self.coef, prec);
        for r in &self.roots {
            z = &z * &principal_sqrt(&AppComplex::from_rational(r, prec));
        }
        z
    }
}

type Entries = Vec<(usize, usize, Entry)>;

/// Matrices of `s_k` and `e_k` on one block with given free signs.
fn block_entries(b: &Block, eig: &[Vec<Rational>], signs: &[i8]) -> Result<(Entries, Entries), String> {
    let k = b.k - 1;
    let one = Rational::from(1);
    let zero_div = |what: &str| format!("zero denominator ({what}) in block k={} paths {:?}", b.k, b.members);
    let mut s = Vec::new();
    let mut e = Vec::new();
    match b.kind {
        BlockKind::Single | BlockKind::Pair => {
            for &t in &b.members {
                let diff = Rational::from(&eig[t][k + 1] - &eig[t][k]);
                if diff == 0 {
                    return Err(zero_div("equal neighbouring eigenvalues"));
                }
                s.push((t, t, Entry::rat(Rational::from(1) / diff)));
            }
            if b.kind == BlockKind::Pair {
                let (t, u) = (b.members[0], b.members[1]);
                let diff = Rational::from(&eig[t][k + 1] - &eig[t][k]);
                let rad = &one - Rational::from(1) / Rational::from(diff.square_ref());
                let coef = Rational::from(signs[0]);
                s.push((t, u, Entry { coef: coef.clone(), roots: vec![rad.clone()] }));
                s.push((u, t, Entry { coef, roots: vec![rad] }));
            }
        }
        BlockKind::Cup => {
            let a: Vec<&Rational> = b.members.iter().map(|&t| &eig[t][k]).collect();
            let mut g = Vec::with_capacity(a.len());
            for i in 0..a.len() {
                let mut gi = Rational::from(a[i] * 2u32) - 1u32;
                for j in 0..a.len() {
                    if i != j {
                        let den = Rational::from(a[i] - a[j]);
                        if den == 0 {
                            return Err(zero_div("repeated eigenvalue"));
                        }
                        gi *= Rational::from(a[i] + a[j]) / den;
                    }
                }
                g.push(gi);
            }
            let sigma: Vec<i8> = std::iter::once(1).chain(signs.iter().copied()).collect();
            for i in 0..a.len() {
                let t = b.members[i];
                if *a[i] == 0 {
                    return Err(zero_div("zero eigenvalue"));
                }
                e.push((t, t, Entry::rat(g[i].clone())));
                s.push((t, t, Entry::rat(Rational::from(&g[i] - &one) / Rational::from(a[i] * 2u32))));
                for j in 0..a.len() {
                    if i == j {
                        continue;
                    }
                    let u = b.members[j];
                    let sign = Rational::from(sigma[i] * sigma[j]);
                    let roots = vec![g[i].clone(), g[j].clone()];
                    e.push((t, u, Entry { coef: sign.clone(), roots: roots.clone() }));
                    let sum = Rational::from(a[i] + a[j]);
                    if sum == 0 {
                        return Err(zero_div("opposite eigenvalues"));
                    }
                    s.push((t, u, Entry { coef: sign / sum, roots }));
                }
            }
        }
    }
    Ok((s, e))
}

/// Groups paths that agree except at shape index `k`.
fn blocks_at(basis: &[UpDownBitableau], k: usize) -> Vec<Block> {
    let mut groups: BTreeMap<Vec<&DoubleYoungDiagram>, Vec<usize>> = BTreeMap::new();
    for (i, y) in basis.iter().enumerate() {
        let key: Vec<&DoubleYoungDiagram> =
            y.shapes().iter().enumerate().filter(|&(j, _)| j != k).map(|(_, s)| s).collect();
        groups.entry(key).or_default().push(i);
    }
    let mut out: Vec<Block> = groups
        .into_values()
        .map(|members| {
            let y = &basis[members[0]];
            let kind = if y.shape(k - 1) == y.shape(k + 1) {
                BlockKind::Cup
            } else if members.len() == 2 {
                BlockKind::Pair
            } else {
                BlockKind::Single
            };
            Block { k, kind, members }
        })
        .collect();
    out.sort_by_key(|b| b.members[0]);
    out
}

#[derive(Clone, Debug)]
pub struct SeminormalRep {
    pub params: CycloParams,
    pub basis: Vec<UpDownBitableau>,
    /// `eig[t][k-1]` is the eigenvalue of `y_k` on path `t`.
    pub eig: Vec<Vec<Rational>>,
    pub s: Vec<CMat>,
    pub e: Vec<CMat>,
    pub blocks: Vec<Vec<Block>>,
    pub precision: Precision,
    /// Shift of delta used for `s`, `e` when the exact value hits a
    /// removable singularity.
    pub epsilon: Option<Rational>,
}

impl SeminormalRep {
    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn prec(&self) -> u32 {
        self.precision.bits
    }

    /// Diagonal of `y_k`, 1-based `k`.
    pub fn y_diag(&self, k: usize) -> Vec<Rational> {
        self.eig.iter().map(|v| v[k - 1].clone()).collect()
    }

    pub fn y(&self, k: usize) -> CMat {
        CMat::diag_rational(&self.y_diag(k), self.prec())
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.dim(), self.prec())
    }

    /// JSON dump: basis order, the permutation to the worked-example listing
    /// when `d = 2`, and dense `(re, im)` decimal matrices.
    pub fn dump_json(&self) -> Value {
        let digits = (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        let dense = |m: &CMat| -> Value {
            Value::Array(
                (0..m.rows())
                    .map(|i| {
                        Value::Array(
                            (0..m.cols())
                                .map(|j| {
                                    let (re, im) = m.get(i, j).to_decimal(digits);
                                    json!([re, im])
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        };
        let mut gens = serde_json::Map::new();
        for k in 1..=self.d() {
            gens.insert(format!("y{k}"), dense(&self.y(k)));
        }
        for k in 1..self.d() {
            gens.insert(format!("s{k}"), dense(&self.s[k - 1]));
            gens.insert(format!("e{k}"), dense(&self.e[k - 1]));
        }
        json!({
            "d": self.d(),
            "n": self.params.n,
            "delta": self.params.delta.to_string(),
            "precision_bits": self.prec(),
            "epsilon": self.epsilon.as_ref().map(|e| e.to_string()),
            "basis": self.basis.iter().map(UpDownBitableau::to_json).collect::<Vec<_>>(),
            "basis_permutation": worked_example_order(&self.basis),
            "generators": gens,
        })
    }
}

struct Builder<'a> {
    basis: &'a [UpDownBitableau],
    eig: &'a [Vec<Rational>],
    blocks: &'a [Vec<Block>],
}

impl Builder<'_> {
    fn assemble(&self, k: usize, signs: &[Vec<i8>], prec: u32) -> Result<(CMat, CMat), String> {
        let n = self.basis.len();
        let mut s = CMat::zeros(n, n, prec);
        let mut e = CMat::zeros(n, n, prec);
        for (b, sg) in self.blocks[k - 1].iter().zip(signs) {
            let (se, ee) = block_entries(b, self.eig, sg)?;
            for (i, j, x) in se {
                s.set(i, j, x.eval(prec));
            }
            for (i, j, x) in ee {
                e.set(i, j, x.eval(prec));
            }
        }
        Ok((s, e))
    }

    /// Chooses free signs for step `k` window by window so that the relations
    /// coupling `k - 1` and `k` hold.
    /// Sign vectors for the step `k` blocks. A block's signs depend only on
    /// its outer shapes `(Y_(k-1), Y_(k+1))`, which makes generators at
    /// distance two or more commute. The signs are then fixed jointly over
    /// every window that shares such a key.
    fn choose_signs(&self, k: usize, prev: Option<(&CMat, &CMat)>) -> Result<Vec<Vec<i8>>, Error> {
        let blocks = &self.blocks[k - 1];
        let Some((sp, ep)) = prev else {
            return Ok(blocks.iter().map(|b| vec![1; b.sign_vars()]).collect());
        };
        let outer = |bi: usize| {
            let y = &self.basis[blocks[bi].members[0]];
            (y.shape(k - 1), y.shape(k + 1))
        };
        let mut keys: BTreeMap<(&DoubleYoungDiagram, &DoubleYoungDiagram), usize> = BTreeMap::new();
        let mut key_of = Vec::with_capacity(blocks.len());
        let mut key_vars: Vec<usize> = Vec::new();
        for bi in 0..blocks.len() {
            let next = keys.len();
            let id = *keys.entry(outer(bi)).or_insert(next);
            if id == next {
                key_vars.push(blocks[bi].sign_vars());
            }
            key_of.push(id);
        }
        // windows agree everywhere except at k-1 and k; with local signs only
        // (Y_(k-2), Y_(k+1)) matters, so one representative per pair suffices
        let mut full: BTreeMap<Vec<&DoubleYoungDiagram>, Vec<usize>> = BTreeMap::new();
        for bi in 0..blocks.len() {
            let y = &self.basis[blocks[bi].members[0]];
            let key = y.shapes().iter().enumerate().filter(|&(j, _)| j != k && j != k - 1).map(|(_, s)| s).collect();
            full.entry(key).or_default().push(bi);
        }
        let mut windows: BTreeMap<(&DoubleYoungDiagram, &DoubleYoungDiagram), Vec<usize>> = BTreeMap::new();
        for bis in full.into_values() {
            let y = &self.basis[blocks[bis[0]].members[0]];
            windows.entry((y.shape(k - 2), y.shape(k + 1))).or_insert(bis);
        }
        // group keys into components linked through shared windows
        let mut parent: Vec<usize> = (0..key_vars.len()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for bis in windows.values() {
            let r0 = root(&mut parent, key_of[bis[0]]);
            for &bi in &bis[1..] {
                let r = root(&mut parent, key_of[bi]);
                parent[r] = r0;
            }
        }
        let mut comps: BTreeMap<usize, (Vec<usize>, Vec<&Vec<usize>>)> = BTreeMap::new();
        for key in 0..key_vars.len() {
            let r = root(&mut parent, key);
            comps.entry(r).or_default().0.push(key);
        }
        for bis in windows.values() {
            let r = root(&mut parent, key_of[bis[0]]);
            comps.get_mut(&r).unwrap().1.push(bis);
        }
        let mut key_signs: Vec<Vec<i8>> = key_vars.iter().map(|&v| vec![1; v]).collect();
        for (comp_keys, wins) in comps.into_values() {
            let vars: usize = comp_keys.iter().map(|&c| key_vars[c]).sum();
            if vars > 24 {
                return Err(Error::SizeGuard(format!("sign search for s_{k} needs {vars} free signs")));
            }
            let prepared: Vec<(Vec<usize>, CMat, CMat)> = wins
                .iter()
                .map(|bis| {
                    let mut idx: Vec<usize> = bis.iter().flat_map(|&bi| blocks[bi].members.iter().copied()).collect();
                    idx.sort_unstable();
                    let sa = sp.select(&idx, &idx);
                    let ea = ep.select(&idx, &idx);
                    (idx, sa, ea)
                })
                .collect();
            let mut found = false;
            'masks: for mask in 0u64..(1u64 << vars) {
                let mut bit = 0;
                for &c in &comp_keys {
                    for v in 0..key_vars[c] {
                        key_signs[c][v] = if mask >> bit & 1 == 1 { -1 } else { 1 };
                        bit += 1;
                    }
                }
                for (bis, (idx, sa, ea)) in wins.iter().zip(&prepared) {
                    let local = |m: usize| idx.binary_search(&m).unwrap();
                    let m = idx.len();
                    let mut sb = CMat::zeros(m, m, SEARCH_BITS);
                    let mut eb = CMat::zeros(m, m, SEARCH_BITS);
                    for &bi in bis.iter() {
                        let (se, ee) =
                            block_entries(&blocks[bi], self.eig, &key_signs[key_of[bi]]).map_err(Error::Degenerate)?;
                        for (i, j, x) in se {
                            sb.set(local(i), local(j), x.eval(SEARCH_BITS));
                        }
                        for (i, j, x) in ee {
                            eb.set(local(i), local(j), x.eval(SEARCH_BITS));
                        }
                    }
                    if coupling_residual(sa, ea, &sb, &eb) > SEARCH_TOL {
                        continue 'masks;
                    }
                }
                found = true;
                break;
            }
            if !found {
                let paths: Vec<usize> = prepared.iter().flat_map(|p| p.0.iter().copied()).collect();
                return Err(Error::Degenerate(format!("no consistent sign choice for s_{k}, e_{k} on paths {paths:?}")));
            }
        }
        Ok(key_of.iter().map(|&c| key_signs[c].clone()).collect())
    }
}

/// Largest residual among the relations tying generators `a` and `a+1`.
fn coupling_residual(sa: &CMat, ea: &CMat, sb: &CMat, eb: &CMat) -> f64 {
    let m = |x: &CMat, y: &CMat| x.mul(y);
    let m3 = |x: &CMat, y: &CMat, z: &CMat| x.mul(y).mul(z);
    [
        rel_residual(&m3(sa, sb, sa), &m3(sb, sa, sb)),
        rel_residual(&m3(sa, eb, ea), &m(sb, ea)),
        rel_residual(&m3(ea, eb, sa), &m(ea, sb)),
        rel_residual(&m3(eb, ea, sb), &m(eb, sa)),
        rel_residual(&m3(sb, ea, eb), &m(sa, eb)),
        rel_residual(&m3(eb, ea, eb), eb),
        rel_residual(&m3(ea, eb, ea), ea),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn construct(
    params: &CycloParams,
    delta0: &Rational,
    basis: &[UpDownBitableau],
    eig: &[Vec<Rational>],
    blocks: &[Vec<Block>],
    prec: u32,
) -> Result<(Vec<CMat>, Vec<CMat>), Result<Error, String>> {
    let builder = Builder { basis, eig, blocks };
    let mut s = Vec::new();
    let mut e = Vec::new();
    for k in 1..params.d {
        // any zero denominator surfaces here, before the sign search
        let plain: Vec<Vec<i8>> = blocks[k - 1].iter().map(|b| vec![1; b.sign_vars()]).collect();
        let (ps, pe) = builder.assemble(k, &plain, SEARCH_BITS).map_err(Err)?;
        if let Some(b) = blocks[k - 1].iter().find(|b| {
            b.members.iter().any(|&i| {
                [&ps, &pe].iter().any(|m| m.row(i).values().any(|x| x.abs().to_f64() > BLOW_UP))
            })
        }) {
            return Err(Ok(Error::Degenerate(format!(
                "s_{k}, e_{k} have no finite limit at delta = {delta0}: block {:?} has colliding eigenvalues",
                b.members
            ))));
        }
        let prev: Option<(CMat, CMat)> =
            s.last().zip(e.last()).map(|(a, b): (&CMat, &CMat)| (a.with_prec(SEARCH_BITS), b.with_prec(SEARCH_BITS)));
        let signs = builder.choose_signs(k, prev.as_ref().map(|(a, b)| (a, b))).map_err(Ok)?;
        let (sk, ek) = builder.assemble(k, &signs, prec).map_err(Err)?;
        s.push(sk);
        e.push(ek);
    }
    Ok((s, e))
}

/// Builds the seminormal model. `y` always uses the exact eigenvalues; when a
/// block has a zero denominator at the given delta, `s` and `e` are built at
/// `delta + epsilon` for a tiny exact `epsilon` and the build fails only if
/// some entry then blows up.
pub fn build_rep(params: &CycloParams, precision: Precision) -> Result<SeminormalRep, Error> {
    let d = params.d;
    if d > SEMINORMAL_MAX_D {
        return Err(Error::SizeGuard(format!("seminormal model limited to d <= {SEMINORMAL_MAX_D}")));
    }
    if d == 0 {
        return Err(Error::InvalidInput("d must be positive".into()));
    }
    let basis = enumerate_updown(d, params.n)?;
    let eig: Vec<Vec<Rational>> = basis.iter().map(|y| eigenvalue_sequence(y, params)).collect();
    let blocks: Vec<Vec<Block>> = (1..d).map(|k| blocks_at(&basis, k)).collect();
    let prec = precision.bits;

    let (s, e, epsilon) = match construct(params, &params.delta, &basis, &eig, &blocks, prec) {
        Ok((s, e)) => (s, e, None),
        Err(Ok(err)) => return Err(err),
        Err(Err(_singular)) => {
            let digits = (prec as f64 * std::f64::consts::LOG10_2).ceil() as u32;
            let eps = Rational::from((1, rug::Integer::from(10).pow(2 * digits + 10)));
            let shifted = CycloParams::new(d, params.n, Rational::from(&params.delta + &eps))?;
            let eig_eps: Vec<Vec<Rational>> = basis.iter().map(|y| eigenvalue_sequence(y, &shifted)).collect();
            match construct(&shifted, &params.delta, &basis, &eig_eps, &blocks, prec) {
                Ok((s, e)) => (s, e, Some(eps)),
                Err(Ok(err)) => return Err(err),
                Err(Err(msg)) => return Err(Error::Degenerate(msg)),
            }
        }
    };
    for (k, (sk, ek)) in s.iter().zip(&e).enumerate() {
        for (name, m) in [("s", sk), ("e", ek)] {
            if m.max_abs().to_f64() > BLOW_UP {
                let worst = blocks[k]
                    .iter()
                    .find(|b| b.members.iter().any(|&i| m.row(i).values().any(|x| x.abs().to_f64() > BLOW_UP)))
                    .map(|b| format!("{:?}", b.members))
                    .unwrap_or_default();
                return Err(Error::Degenerate(format!(
                    "{name}_{} has no finite limit at delta = {} (block {worst})",
                    k + 1,
                    params.delta
                )));
            }
        }
    }
    Ok(SeminormalRep { params: params.clone(), basis, eig, s, e, blocks, precision, epsilon })
}

/// Every relation of the VW presentation, the cyclotomic relation and the
/// eigenspace support statements, one check per relation family.
pub fn verify_vw_relations(rep: &SeminormalRep, tol: f64) -> Vec<Check> {
    let d = rep.d();
    let prec = rep.prec();
    let one = rep.identity();
    let y: Vec<CMat> = (1..=d).map(|k| rep.y(k)).collect();
    let (s, e) = (&rep.s, &rep.e);
    let omegas = rep.params.omegas(2 * d);
    let mut out = Vec::new();
    let mut res = |name: &str, a: &CMat, b: &CMat| out.push(Check::residual(name, ANCHOR, rel_residual(a, b), tol));

    for a in 0..d.saturating_sub(1) {
        res("s_a^2 = 1", &s[a].mul(&s[a]), &one);
        res("e_a^2 = omega_0 e_a", &e[a].mul(&e[a]), &e[a].scale_rational(&omegas[0]));
        res("e_a s_a = e_a", &e[a].mul(&s[a]), &e[a]);
        res("s_a e_a = e_a", &s[a].mul(&e[a]), &e[a]);
        let ya = &y[a];
        let yb = &y[a + 1];
        let rhs = e[a].sub(&one);
        res("s_a y_a - y_(a+1) s_a = e_a - 1", &s[a].mul(ya).sub(&yb.mul(&s[a])), &rhs);
        res("y_a s_a - s_a y_(a+1) = e_a - 1", &ya.mul(&s[a]).sub(&s[a].mul(yb)), &rhs);
        let sum = ya.add(yb);
        let zero = CMat::zeros(rep.dim(), rep.dim(), prec);
        res("e_a (y_a + y_(a+1)) = 0", &e[a].mul(&sum), &zero);
        res("(y_a + y_(a+1)) e_a = 0", &sum.mul(&e[a]), &zero);
        for i in 0..d {
            if i != a && i != a + 1 {
                res("s_a y_i = y_i s_a", &s[a].mul(&y[i]), &y[i].mul(&s[a]));
                res("e_a y_i = y_i e_a", &e[a].mul(&y[i]), &y[i].mul(&e[a]));
            }
        }
        for b in 0..d - 1 {
            if a.abs_diff(b) > 1 {
                res("s_a s_b = s_b s_a", &s[a].mul(&s[b]), &s[b].mul(&s[a]));
                res("s_a e_b = e_b s_a", &s[a].mul(&e[b]), &e[b].mul(&s[a]));
                res("e_a e_b = e_b e_a", &e[a].mul(&e[b]), &e[b].mul(&e[a]));
            }
        }
    }
    for c in 0..d.saturating_sub(2) {
        let (sc, sd, ec, ed) = (&s[c], &s[c + 1], &e[c], &e[c + 1]);
        res("s_c s_(c+1) s_c = s_(c+1) s_c s_(c+1)", &sc.mul(sd).mul(sc), &sd.mul(sc).mul(sd));
        res("s_c e_(c+1) e_c = s_(c+1) e_c", &sc.mul(ed).mul(ec), &sd.mul(ec));
        res("e_c e_(c+1) s_c = e_c s_(c+1)", &ec.mul(ed).mul(sc), &ec.mul(sd));
        res("e_(c+1) e_c s_(c+1) = e_(c+1) s_c", &ed.mul(ec).mul(sd), &ed.mul(sc));
        res("s_(c+1) e_c e_(c+1) = s_c e_(c+1)", &sd.mul(ec).mul(ed), &sc.mul(ed));
        res("e_(c+1) e_c e_(c+1) = e_(c+1)", &ed.mul(ec).mul(ed), ed);
        res("e_c e_(c+1) e_c = e_c", &ec.mul(ed).mul(ec), ec);
    }
    for i in 0..d {
        for j in 0..d {
            res("y_i y_j = y_j y_i", &y[i].mul(&y[j]), &y[j].mul(&y[i]));
        }
    }
    if d >= 2 {
        let mut yk = one.clone();
        for (k, w) in omegas.iter().enumerate() {
            let lhs = e[0].mul(&yk).mul(&e[0]);
            res("e_1 y_1^k e_1 = omega_k e_1", &lhs, &e[0].scale_rational(w));
            if k < omegas.len() - 1 {
                yk = yk.mul(&y[0]);
            }
        }
    }
    let ya = y[0].sub(&one.scale_rational(&rep.params.alpha));
    let yb = y[0].sub(&one.scale_rational(&rep.params.beta));
    out.push(Check::exact("(y_1 - alpha)(y_1 - beta) = 0", ANCHOR, ya.mul(&yb).is_zero()));

    out.extend(support_checks(rep, tol));
    worst_by_name(out)
}

fn tiny(x: &AppComplex, tol: f64) -> bool {
    x.abs().to_f64() <= tol
}

/// `e_k` vanishes off `i_k + i_(k+1) = 0`, each `e_k` block has trace
/// `omega_0`, and `psi_k = s_k (y_k - y_(k+1)) + 1` moves the `i`
/// coordinates into the `s_k i` coordinates when `i_k + i_(k+1) != 0`.
pub fn support_checks(rep: &SeminormalRep, tol: f64) -> Vec<Check> {
    let d = rep.d();
    let mut out = Vec::new();
    let n0 = Rational::from(rep.params.big_n());
    let scale = |m: &CMat| m.max_abs().to_f64().max(1.0);
    for k in 1..d {
        let ek = &rep.e[k - 1];
        let sk = &rep.s[k - 1];
        let cut = tol * scale(ek);
        let mut ok = true;
        for t in 0..rep.dim() {
            let sum = Rational::from(&rep.eig[t][k - 1] + &rep.eig[t][k]);
            if sum != 0 && (ek.row(t).values().any(|x| !tiny(x, cut)) || (0..rep.dim()).any(|u| !tiny(&ek.get(u, t), cut))) {
                ok = false;
            }
        }
        out.push(Check::exact("e_k kills M_i unless i_k + i_(k+1) = 0", ANCHOR, ok));

        let mut worst = 0.0f64;
        for b in rep.blocks[k - 1].iter().filter(|b| b.kind == BlockKind::Cup) {
            let mut tr = AppComplex::zero(rep.prec());
            for &t in &b.members {
                tr = &tr + &ek.get(t, t);
            }
            let diff = &tr - &AppComplex::from_rational(&n0, rep.prec());
            worst = worst.max(diff.abs().to_f64() / n0.to_f64());
        }
        out.push(Check::residual("trace of e_k on each block = omega_0", ANCHOR, worst, tol));

        let diff: Vec<Rational> = (0..rep.dim()).map(|t| Rational::from(&rep.eig[t][k - 1] - &rep.eig[t][k])).collect();
        let psi = sk.mul(&CMat::diag_rational(&diff, rep.prec())).add(&rep.identity());
        let cut = tol * scale(&psi);
        let mut ok = true;
        for t in 0..rep.dim() {
            let it = &rep.eig[t];
            if Rational::from(&it[k - 1] + &it[k]) == 0 {
                continue;
            }
            let mut target = it.clone();
            target.swap(k - 1, k);
            for u in 0..rep.dim() {
                let x = psi.get(u, t);
                if !tiny(&x, cut) && rep.eig[u] != target {
                    ok = false;
                }
            }
        }
        out.push(Check::exact("psi_k M_i lies in M_(s_k i)", ANCHOR, ok));
    }
    out
}

/// For `d = 2`: entry `i` is the index in our basis of the worked example's
/// `v_(i+1)`. Empty for other `d`.
pub fn worked_example_order(basis: &[UpDownBitableau]) -> Vec<usize> {
    if basis.first().map(UpDownBitableau::d) != Some(2) {
        return Vec::new();
    }
    // (step-1 half, final lower, final upper)
    let listing: [(&str, &str, &str); 8] = [
        ("lower", "(2)", "∅"),
        ("lower", "(1,1)", "∅"),
        ("lower", "∅", "∅"),
        ("upper", "∅", "∅"),
        ("lower", "(1)", "(1)"),
        ("upper", "(1)", "(1)"),
        ("upper", "∅", "(1,1)"),
        ("upper", "∅", "(2)"),
    ];
    listing
        .iter()
        .map(|(h, lo, up)| {
            basis
                .iter()
                .position(|y| {
                    y.steps()[0].half.name() == *h
                        && y.last().lower().to_string() == *lo
                        && y.last().upper().to_string() == *up
                })
                .expect("d = 2 listing covers every path")
        })
        .collect()
}

/// The worked example's `s_1` and `e_1` on `v_1..v_4`, as exact data:
/// diagonal rationals and the off-diagonal `(v3, v4)` entry as
/// `coef * sqrt(rad)`.
pub struct GoldenBlock {
    pub s_diag: [Rational; 4],
    pub e_diag: [Rational; 4],
    pub s_off: (Rational, Rational),
    pub e_off: (Rational, Rational),
}

pub fn golden_d2(params: &CycloParams) -> GoldenBlock {
    let (a, b) = (&params.alpha, &params.beta);
    let one = Rational::from(1);
    let a_b = Rational::from(a - b);
    let apb = Rational::from(a + b);
    let s3 = Rational::from(&apb - &one) / &a_b;
    let two_a = Rational::from(a * 2u32) - 1u32;
    let two_b = Rational::from(b * 2u32) - 1u32;
    let rad = -Rational::from(&two_b * &two_a);
    GoldenBlock {
        s_diag: [Rational::from(-1), Rational::from(1), s3.clone(), -s3],
        e_diag: [
            Rational::new(),
            Rational::new(),
            Rational::from(&two_a * &apb) / &a_b,
            -Rational::from(&two_b * &apb) / &a_b,
        ],
        s_off: (Rational::from(1) / &a_b, rad.clone()),
        e_off: (Rational::from(&apb / &a_b), rad),
    }
}

/// Compares `s_1`, `e_1` on `v_1..v_4` with the worked example, allowing a
/// `+-1` diagonal change of basis (only the shared sign of the `(v3, v4)`
/// entries is free).
pub fn compare_golden(rep: &SeminormalRep, tol: f64) -> Vec<Check> {
    let anchor = "worked-example";
    if rep.d() != 2 {
        return vec![Check::skipped("worked example s_1, e_1", anchor, "only defined for d = 2")];
    }
    let prec = rep.prec();
    let g = golden_d2(&rep.params);
    let ord = worked_example_order(&rep.basis);
    let v: Vec<usize> = ord[..4].to_vec();
    let s = &rep.s[0];
    let e = &rep.e[0];
    let rel = |x: &AppComplex, y: &AppComplex| -> f64 {
        let scale = x.abs().to_f64().max(y.abs().to_f64()).max(1e-300);
        let diff = (x - y).abs().to_f64();
        if diff == 0.0 {
            0.0
        } else {
            diff / scale
        }
    };
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let (sx, ex) = (s.get(v[i], v[j]), e.get(v[i], v[j]));
            let (sy, ey) = if i == j {
                (AppComplex::from_rational(&g.s_diag[i], prec), AppComplex::from_rational(&g.e_diag[i], prec))
            } else if (i, j) == (2, 3) || (i, j) == (3, 2) {
                let root = principal_sqrt(&AppComplex::from_rational(&g.s_off.1, prec));
                let sy = &root * &AppComplex::from_rational(&g.s_off.0, prec);
                let ey = &root * &AppComplex::from_rational(&g.e_off.0, prec);
                // gauge: flip both if ours has the opposite sign
                let flip = rel(&sx, &sy) > rel(&sx, &-&sy);
                if flip {
                    (-&sy, -&ey)
                } else {
                    (sy, ey)
                }
            } else {
                (AppComplex::zero(prec), AppComplex::zero(prec))
            };
            worst = worst.max(rel(&sx, &sy)).max(rel(&ex, &ey));
        }
    }
    vec![Check::residual("worked example s_1, e_1 on v1..v4", anchor, worst, tol)
        .with_detail(format!("basis order of v1..v8: {ord:?}"))]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn rep(d: usize, delta: &str) -> SeminormalRep {
        let p = build_params(d, &q(delta), None).unwrap();
        build_rep(&p, Precision::default()).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = build_params(2, &q("1"), Some(4)).unwrap();
        assert_eq!(p.big_n(), 8);
        assert_eq!(p.omegas(2), vec![q("8"), q("28"), q("112")]);
        assert!(build_params(2, &q("1"), Some(3)).is_err());
    }

    #[test]
    fn blocks_d2() {
        let r = rep(2, "2");
        let kinds: Vec<(BlockKind, usize)> = r.blocks[0].iter().map(|b| (b.kind, b.members.len())).collect();
        assert_eq!(kinds.iter().filter(|(k, _)| *k == BlockKind::Cup).count(), 1);
        assert_eq!(kinds.iter().filter(|(k, _)| *k == BlockKind::Pair).count(), 1);
        assert_eq!(kinds.iter().filter(|(k, _)| *k == BlockKind::Single).count(), 4);
    }

    #[test]
    fn worked_example_entries() {
        let r = rep(2, "1");
        let ord = worked_example_order(&r.basis);
        assert_eq!(ord, vec![0, 2, 1, 7, 3, 4, 5, 6]);
        let one = AppComplex::one(256);
        assert!(crate::numeric::approx_eq(&r.s[0].get(ord[0], ord[0]), &-&one, 1e-60));
        for delta in ["1", "2", "3", "-1", "-2"] {
            let r = rep(2, delta);
            let c = compare_golden(&r, 1e-25);
            assert!(c[0].passed(), "delta={delta}: {:?}", c[0]);
        }
    }

    #[test]
    fn gamma_matches_moment_solve_at_k1() {
        // e_1 y_1^j e_1 = omega_j e_1 for j = 0, 1 pins the two weights
        for delta in ["2", "3", "-1", "1/2"] {
            let p = build_params(2, &q(delta), None).unwrap();
            let (a, b) = (p.alpha.clone(), p.beta.clone());
            let w = p.omegas(1);
            let gb = (&w[1] - Rational::from(&w[0] * &a)) / Rational::from(&b - &a);
            let ga = Rational::from(&w[0] - &gb);
            let g = golden_d2(&p);
            assert_eq!(g.e_diag[2], ga);
            assert_eq!(g.e_diag[3], gb);
        }
    }

    #[test]
    fn relations_d2_d3() {
        for d in [2, 3] {
            for delta in ["-2", "-1", "0", "1", "2", "3"] {
                let r = match build_rep(&build_params(d, &q(delta), None).unwrap(), Precision::default()) {
                    Ok(r) => r,
                    Err(Error::Degenerate(msg)) => {
                        eprintln!("d={d} delta={delta}: degenerate: {msg}");
                        continue;
                    }
                    Err(e) => panic!("{e}"),
                };
                for c in verify_vw_relations(&r, 1e-25) {
                    assert!(c.passed(), "d={d} delta={delta}: {c:?}");
                }
            }
        }
    }

    #[test]
    fn relations_d4() {
        for delta in ["-1", "1/2"] {
            let r = build_rep(&build_params(4, &q(delta), None).unwrap(), Precision::default()).unwrap();
            assert_eq!(r.dim(), 160);
            for c in verify_vw_relations(&r, 1e-25) {
                assert!(c.passed(), "delta={delta}: {c:?}");
            }
        }
        for delta in ["-2", "0", "1"] {
            let r = build_rep(&build_params(4, &q(delta), None).unwrap(), Precision::default());
            assert!(matches!(r, Err(Error::Degenerate(_))), "delta={delta}");
        }
    }
}

