use rug::Rational;

use brauerlab::algebra::{jucys_murphy_all, verify_defining_relations, AlgebraElement, ScalarMode};
use brauerlab::cache::{MultTable, CACHE_MAX_D};
use brauerlab::cellular::{
    cell_dimension, cell_dimension_identity, cell_module, decomposition_numbers, form_is_invariant, labels,
    verify_cell_relations, CELL_MODULE_MAX_D, DECOMPOSITION_MAX_D,
};
use brauerlab::diagram::{double_factorial, enumerate_diagrams, Gen};
use brauerlab::kl::{kl_csv, multiplicity_crosscheck, KlTable};
use brauerlab::numeric::Precision;
use brauerlab::report::Check;
use brauerlab::seminormal::{
    build_params, build_rep, compare_golden, support_checks, verify_vw_relations, SeminormalRep, SEMINORMAL_MAX_D,
};
use brauerlab::truncation::{
    abstract_radical, build_phi_images, build_truncation, compare_worked_example_images, generated_dimension,
    image_radical_flat_limit, structure_constant_match, verify_aux_identities, verify_brauer_on_images,
    verify_jm_correspondence, SPAN_CUTOFF, TRUNCATION_MAX_D,
};
use brauerlab::Error;

use crate::{Config, Outcome};

const GENERIC_MAX_D: usize = 5;
const ENUMERATE_MAX_D: usize = 7;
const KL_MAX_N: usize = 10;
const ORACLE_MAX_N: usize = 5;
const SPOT_CHECKS: usize = 256;

fn tagged(prefix: &str, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{prefix}: {}", c.name);
            c
        })
        .collect()
}

fn modes(cfg: &Config) -> Vec<ScalarMode> {
    if cfg.generic {
        vec![ScalarMode::Generic]
    } else {
        cfg.deltas().into_iter().map(ScalarMode::Specialized).collect()
    }
}

fn mode_label(mode: &ScalarMode) -> String {
    match mode {
        ScalarMode::Generic => "generic".into(),
        ScalarMode::Specialized(delta) => format!("delta={delta}"),
    }
}

fn guard(what: &str, d: usize, max: usize) -> Result<(), Error> {
    if d > max {
        Err(Error::SizeGuard(format!("{what} needs d <= {max}, got {d}")))
    } else {
        Ok(())
    }
}

/// Seminormal model at `delta`, or `None` after recording why it does not exist.
fn model(cfg: &Config, delta: &Rational, out: &mut Outcome) -> Result<Option<SeminormalRep>, Error> {
    let params = build_params(cfg.d, delta, Some(cfg.n()))?;
    match build_rep(&params, Precision::with_bits(cfg.precision)) {
        Ok(rep) => Ok(Some(rep)),
        Err(Error::Degenerate(why)) => {
            let msg = format!("d={} delta={delta}: {why}", cfg.d);
            out.checks.push(Check::skipped(format!("delta={delta}: seminormal model"), "degenerate", msg.clone()));
            out.degenerate.push(msg);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub fn dims(cfg: &Config) -> Outcome {
    let d = cfg.d;
    let mut out = Outcome::default();
    let want = double_factorial(2 * d as u64 - 1);
    if d <= ENUMERATE_MAX_D {
        let got = enumerate_diagrams(d).len() as u64;
        out.checks.push(Check::exact("diagram count = (2d-1)!!", "dimension", got == want).with_detail(format!("{got}")));
    } else {
        out.checks.push(Check::skipped("diagram count = (2d-1)!!", "dimension", "enumeration limited to d <= 7"));
    }
    let (sum, total) = cell_dimension_identity(d);
    out.checks.push(
        Check::exact("sum of squared cell dimensions = (2d-1)!!", "cell-modules", sum == total).with_detail(format!("{sum}")),
    );
    out.text.push(format!("{want}"));
    let mut csv = String::from("lambda,dim\n");
    for l in labels(d, &Rational::from(1)).labels {
        let dim = cell_dimension(&l, d);
        out.text.push(format!("dim Delta({l}) = {dim}"));
        csv += &format!("{l},{dim}\n");
    }
    out.csv.push(csv);
    out
}

pub fn relations(cfg: &Config) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    if cfg.generic {
        guard("the generic relation sweep", cfg.d, GENERIC_MAX_D)?;
    }
    for mode in modes(cfg) {
        let label = mode_label(&mode);
        out.checks.extend(tagged(&label, verify_defining_relations(cfg.d, &mode)));
        if let Some(dir) = &cfg.cache_dir {
            guard("the multiplication table cache", cfg.d, CACHE_MAX_D)?;
            let (table, hit) = MultTable::load_or_compute(dir, cfg.d, &mode)?;
            let bad = table.spot_check(SPOT_CHECKS, cfg.seed);
            out.checks.push(
                Check::exact(format!("{label}: cached products agree with composition"), "cache", bad == 0).with_detail(
                    format!("{} from {}, {SPOT_CHECKS} samples, seed {}", table.key.file_name(), if hit { "disk" } else { "fresh computation" }, cfg.seed),
                ),
            );
        }
    }
    Ok(out)
}

pub fn jm(cfg: &Config) -> Result<Outcome, Error> {
    let d = cfg.d;
    let mut out = Outcome::default();
    guard("the Jucys-Murphy checks", d, if cfg.generic { GENERIC_MAX_D } else { CELL_MODULE_MAX_D })?;
    for mode in modes(cfg) {
        let label = mode_label(&mode);
        let xi = jucys_murphy_all(d, &mode);
        let mut commute = true;
        for j in 0..d {
            for k in j + 1..d {
                commute &= &xi[j] * &xi[k] == &xi[k] * &xi[j];
            }
        }
        out.checks.push(Check::exact(format!("{label}: xi_j xi_k = xi_k xi_j"), "jucys-murphy", commute));
        let mut centralises = true;
        for k in 0..d {
            for i in 1..k {
                for kind in [Gen::T, Gen::G] {
                    let x = AlgebraElement::generator(kind, i, d, &mode)?;
                    centralises &= &x * &xi[k] == &xi[k] * &x;
                }
            }
        }
        out.checks.push(Check::exact(
            format!("{label}: xi_k commutes with t_i, g_i for i < k-1"),
            "jucys-murphy",
            centralises,
        ));
        if let ScalarMode::Specialized(delta) = &mode {
            if d <= TRUNCATION_MAX_D {
                if let Some(rep) = model(cfg, delta, &mut out)? {
                    let im = build_phi_images(&rep, &build_truncation(&rep))?;
                    out.checks.extend(tagged(&label, verify_jm_correspondence(&im, &rep, cfg.tol)));
                }
            }
        }
    }
    Ok(out)
}

pub fn gram(cfg: &Config) -> Result<Outcome, Error> {
    let d = cfg.d;
    guard("cell modules", d, CELL_MODULE_MAX_D)?;
    let mut out = Outcome::default();
    let mut csv = String::from("delta,lambda,dim,rank\n");
    for delta in cfg.deltas() {
        let label = format!("delta={delta}");
        let integral = delta.is_integer();
        for l in labels(d, &delta).labels {
            let mut module = cell_module(&l, d, &delta)?;
            let rank = module.gram().rank();
            let dim = module.dim();
            csv += &format!("{delta},{l},{dim},{rank}\n");
            out.text.push(format!("{label} Delta({l}): dim {dim}, rank {rank}"));
            if d <= DECOMPOSITION_MAX_D {
                out.checks.push(Check::exact(format!("{label}: form on Delta({l}) is invariant"), "cell-modules", form_is_invariant(&mut module)));
                out.checks.extend(tagged(&format!("{label} Delta({l})"), verify_cell_relations(&module)));
            }
            if !integral {
                out.checks.push(Check::exact(
                    format!("{label}: Gram matrix of Delta({l}) is nondegenerate"),
                    "semisimplicity",
                    rank == dim,
                ));
            }
        }
    }
    out.csv.push(csv);
    Ok(out)
}

pub fn decomp(cfg: &Config) -> Result<Outcome, Error> {
    guard("decomposition numbers", cfg.d, DECOMPOSITION_MAX_D)?;
    let mut out = Outcome::default();
    for delta in cfg.deltas() {
        let table = decomposition_numbers(cfg.d, &delta)?;
        out.checks.push(
            Check::exact(format!("delta={delta}: decomposition matrix is unitriangular"), "cell-modules", table.is_unitriangular())
                .with_detail(format!("radical dimension {}", table.radical_dim)),
        );
        out.csv.push(format!("# d={} delta={delta}\n{}", cfg.d, table.to_csv()));
        out.text.push(format!("d={} delta={delta}, radical dimension {}", cfg.d, table.radical_dim));
        out.text.extend(table.to_csv().lines().map(str::to_string));
    }
    Ok(out)
}

pub fn seminormal(cfg: &Config) -> Result<Outcome, Error> {
    guard("the seminormal model", cfg.d, SEMINORMAL_MAX_D)?;
    let mut out = Outcome::default();
    for delta in cfg.deltas() {
        let label = format!("delta={delta}");
        let Some(rep) = model(cfg, &delta, &mut out)? else { continue };
        out.text.push(format!("{label}: {} basis paths", rep.dim()));
        out.checks.extend(tagged(&label, verify_vw_relations(&rep, cfg.tol)));
        out.checks.extend(tagged(&label, support_checks(&rep, cfg.tol)));
        if cfg.d == 2 {
            out.checks.extend(tagged(&label, compare_golden(&rep, cfg.tol)));
        }
    }
    Ok(out)
}

pub fn phi_verify(cfg: &Config) -> Result<Outcome, Error> {
    let d = cfg.d;
    guard("the truncated model", d, TRUNCATION_MAX_D)?;
    let mut out = Outcome::default();
    for delta in cfg.deltas() {
        let label = format!("delta={delta}");
        let Some(rep) = model(cfg, &delta, &mut out)? else { continue };
        let proj = build_truncation(&rep);
        let im = build_phi_images(&rep, &proj)?;
        out.text.push(format!("{label}: {} small paths", im.dim()));
        let mut checks = verify_brauer_on_images(&im, cfg.tol);
        checks.extend(verify_aux_identities(&rep, &proj, cfg.tol));
        checks.extend(verify_jm_correspondence(&im, &rep, cfg.tol));
        checks.extend(structure_constant_match(&im, cfg.tol)?);
        if d == 2 {
            checks.extend(compare_golden(&rep, cfg.tol));
            checks.extend(compare_worked_example_images(&im, &rep, cfg.tol));
        }
        let radical = abstract_radical(d, &delta)?;
        let want = double_factorial(2 * d as u64 - 1) as usize;
        if radical.radical_dim == 0 {
            let span = generated_dimension(&im, SPAN_CUTOFF);
            checks.push(
                Check::exact("images span (2d-1)!! dimensions", "truncated-dimension", span.dim == want && span.gap_orders >= 10.0 && !span.inconclusive)
                    .with_detail(format!("dimension {}, gap {:.1} orders", span.dim, span.gap_orders)),
            );
        } else {
            checks.push(Check::skipped(
                "images span (2d-1)!! dimensions",
                "truncated-dimension",
                format!("not semisimple here (radical dimension {}), the model sees a quotient", radical.radical_dim),
            ));
        }
        out.checks.extend(tagged(&label, checks));
        if d == 2 && delta == 0 {
            let eps = brauerlab::numeric::rat_pow(&Rational::from((1, 10)), 40);
            let flat = image_radical_flat_limit(d, &delta, &eps, Precision::with_bits(cfg.precision))?;
            let same = flat.data == radical;
            out.checks.push(
                Check::exact(format!("{label}: image and abstract radicals agree"), "non-semisimple", same && radical.radical_dim == 1 && radical.semisimple_quotient_dim() == 2 && radical.commutative_quotient)
                    .with_detail(format!("image {:?}, abstract {:?}, gap {:.1} orders", flat.data, radical, flat.gap_orders)),
            );
        }
    }
    Ok(out)
}

pub fn kl(cfg: &Config) -> Result<Outcome, Error> {
    let n = cfg.n();
    if n > KL_MAX_N {
        return Err(Error::SizeGuard(format!("KL tables need n <= {KL_MAX_N}, got {n}")));
    }
    let mut out = Outcome::default();
    let table = KlTable::new(n);
    let m = table.len();
    let (mut diag, mut support, mut positive) = (true, true, true);
    for y in 0..m {
        for x in 0..m {
            let p = table.poly(x, y);
            diag &= x != y || p.coeffs().len() == 1 && p.coeff(0) == 1;
            support &= table.bruhat_le(x, y) || p.is_zero();
            positive &= p.coeffs().iter().all(|c| *c >= 0);
        }
    }
    let anchor = "kl-polynomials";
    out.checks.push(Check::exact(format!("n={n}: n_(x,x) = 1"), anchor, diag));
    out.checks.push(Check::exact(format!("n={n}: n_(x,y) = 0 unless x <= y"), anchor, support));
    out.checks.push(Check::exact(format!("n={n}: coefficients are nonnegative"), anchor, positive));
    if n <= ORACLE_MAX_N {
        let oracle = table.bar_involution_oracle();
        let same = (0..m).all(|x| (0..m).all(|y| table.poly(x, y) == oracle[x][y]));
        out.checks.push(Check::exact(format!("n={n}: recursion = bar-involution solve"), anchor, same));
    } else {
        out.checks.push(Check::skipped(format!("n={n}: recursion = bar-involution solve"), anchor, "oracle limited to n <= 5"));
    }
    for delta in cfg.deltas() {
        let csv = kl_csv(cfg.d, &delta, n)?;
        out.text.push(format!("d={} delta={delta} n={n}", cfg.d));
        out.text.extend(csv.lines().map(str::to_string));
        out.csv.push(format!("# d={} delta={delta} n={n}\n{csv}", cfg.d));
    }
    Ok(out)
}

pub fn crosscheck(cfg: &Config) -> Result<Outcome, Error> {
    guard("the multiplicity cross-check", cfg.d, 3)?;
    let mut out = Outcome::default();
    for delta in cfg.deltas() {
        let c = multiplicity_crosscheck(cfg.d, &delta, cfg.n())?;
        out.checks.extend(c.checks());
        out.csv.push(format!("# d={} delta={delta} n={}\n{}", cfg.d, cfg.n(), c.to_csv()));
        out.text.extend(c.to_csv().lines().map(|l| format!("delta={delta} {l}")));
    }
    Ok(out)
}
