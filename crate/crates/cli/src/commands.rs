//! Subcommand bodies. Each returns text, JSON lines and a mismatch flag; the
//! JSON lines never contain timings so reruns are byte-identical.

use std::fmt::Write as _;

use cisforge_core::asymptotics::{binomial_irreducible, expurgation_report, gv_delta, qt_irreducible_family, two_factor_primes};
use cisforge_core::descent::{descend, DescentBasis};
use cisforge_core::distance::DEFAULT_BUDGET;
use cisforge_core::enumeration::count_report;
use cisforge_core::field::field_of_size;
use cisforge_core::parse::{parse_elem, parse_poly};
use cisforge_core::search::{
    qpc_search, reproduce_table, SearchJob, SearchReport, TableId, TableOptions, EXHAUSTIVE_CUTOFF, RANDOM_BUDGET,
};
use cisforge_core::z4::{count_cis_z4, z4_search};
use cisforge_core::{CodeRecord, Field, GeneratorSpec, LinearCode, Poly, QuotientRing};
use serde::Serialize;
use serde_json::json;

use crate::{
    BoundArgs, Command, Config, CountArgs, DescendArgs, FactorArgs, Mode, SearchArgs, ShapeArgs, ShapeKind, TableArgs,
    VerifyArgs, Z4Command, Z4CountArgs, Z4SearchArgs,
};

const Z4_BUDGET: u64 = 100;

#[derive(Clone, Debug, Default)]
pub struct Output {
    pub text: String,
    pub json: Vec<String>,
    pub mismatch: bool,
    pub seed: u64,
    pub seed_used: bool,
}

impl Output {
    fn push_json<T: Serialize>(&mut self, value: &T) -> Result<(), String> {
        self.json.push(serde_json::to_string(value).map_err(|e| e.to_string())?);
        Ok(())
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

type CmdResult = Result<Output, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn name(command: &Command) -> String {
    match command {
        Command::Search(_) => "search",
        Command::Table(_) => "table",
        Command::Verify(_) => "verify",
        Command::Count(_) => "count",
        Command::Bound(_) => "bound",
        Command::Shape(_) => "shape",
        Command::Descend(_) => "descend",
        Command::Factor(_) => "factor",
        Command::Z4(Z4Command::Search(_)) => "z4 search",
        Command::Z4(Z4Command::Count(_)) => "z4 count",
        Command::Replay(_) => "replay",
    }
    .to_string()
}

pub fn execute(command: &Command, config: &Config) -> CmdResult {
    match command {
        Command::Search(a) => search(a, config),
        Command::Table(a) => table(a, config),
        Command::Verify(a) => verify(a, config),
        Command::Count(a) => count(a),
        Command::Bound(a) => bound(a),
        Command::Shape(a) => shape(a),
        Command::Descend(a) => descend_cmd(a, config),
        Command::Factor(a) => factor(a),
        Command::Z4(Z4Command::Search(a)) => z4_search_cmd(a, config),
        Command::Z4(Z4Command::Count(a)) => z4_count(a),
        Command::Replay(_) => Err("replay is handled before dispatch".into()),
    }
}

fn field(q: u64) -> Result<Field, String> {
    field_of_size(q).map_err(err)
}

fn poly(field: &Field, text: &str) -> Result<Poly, String> {
    parse_poly(field, text).map_err(|e| format!("'{text}': {e}"))
}

fn distance_budget(config: &Config) -> u128 {
    config.distance_budget.map_or(DEFAULT_BUDGET, u128::from)
}

fn report_text(out: &mut Output, rep: &SearchReport) {
    let spec = &rep.best_spec;
    out.line(format!("h        {} ({})", spec.ring().modulus(), spec.ring().family()));
    out.line(format!("n, t     {}, {}", spec.n(), spec.t()));
    out.line(format!("mode     {}", rep.mode));
    out.line(format!("best d   {}", rep.best_d));
    for (i, a) in spec.generators().iter().enumerate() {
        out.line(format!("a_{}      {a}", i + 1));
    }
    out.line(format!("tried    {}", rep.candidates_tried));
}

fn search(a: &SearchArgs, config: &Config) -> CmdResult {
    let f = field(a.q)?;
    let budget = a.budget.or(config.random_budget).unwrap_or(RANDOM_BUDGET);
    let rep = if a.h.trim() == "random" {
        let n = a.n.ok_or("--h random needs --n")?;
        if a.mode != Mode::Random {
            return Err("--h random needs --mode random".into());
        }
        qpc_search(a.q, a.t, n, a.seed, budget, a.target).map_err(err)?
    } else {
        let ring = QuotientRing::new(&poly(&f, &a.h)?).map_err(err)?;
        let job = match a.mode {
            Mode::Exhaustive => SearchJob::exhaustive(&ring, a.t),
            Mode::Random => SearchJob::random(&ring, a.t, a.seed, budget),
        };
        job.with_target(a.target).run().map_err(err)?
    };
    let mut out = Output { seed: a.seed, seed_used: a.mode == Mode::Random, ..Output::default() };
    report_text(&mut out, &rep);
    out.push_json(&rep.record())?;
    Ok(out)
}

fn table(a: &TableArgs, config: &Config) -> CmdResult {
    let id = TableId::parse(&a.table).map_err(err)?;
    let data = id.data();
    let f = field(data.q)?;
    let options = TableOptions {
        seed: a.seed,
        exhaustive_cutoff: a.cutoff.or(config.exhaustive_cutoff).map_or(EXHAUSTIVE_CUTOFF, u128::from),
        random_budget: a.budget.or(config.random_budget).unwrap_or(RANDOM_BUDGET),
        alpha: a.alpha.as_deref().map(|s| parse_elem(&f, s)).transpose().map_err(err)?,
        ns: a.n.clone(),
    };
    let rows = reproduce_table(id, &options).map_err(err)?;
    let mut out = Output { seed: a.seed, ..Output::default() };
    let contract = if id.exact_contract() { "exact" } else { "at least" };
    out.line(format!("table {id}: q = {}, t = {}, contract: d {contract} the table value", data.q, data.t));
    out.line(format!("{:>3} {:>7} {:>7} {:>7}  {:<10} {:>9}  {}", "n", "d", "table", "linear", "mode", "tried", "ok"));
    for row in &rows {
        let rec = row.record(id);
        out.seed_used |= rec.search.seed.is_some();
        out.mismatch |= !rec.ok;
        out.line(format!(
            "{:>3} {:>7} {:>7} {:>7}  {:<10} {:>9}  {}",
            rec.n,
            rec.d_found,
            rec.d_table,
            rec.d_linear,
            rec.search.mode.to_string(),
            rec.search.candidates_tried,
            if rec.ok { "yes" } else { "NO" }
        ));
        out.push_json(&rec)?;
    }
    Ok(out)
}

fn build_spec(q: u64, h: &str, t: usize, gens: &[String]) -> Result<GeneratorSpec, String> {
    let f = field(q)?;
    let ring = QuotientRing::new(&poly(&f, h)?).map_err(err)?;
    let gens = gens
        .iter()
        .map(|g| ring.element(&poly(&f, g)?).map_err(err))
        .collect::<Result<Vec<_>, _>>()?;
    GeneratorSpec::new(&ring, t, gens).map_err(err)
}

fn verify(a: &VerifyArgs, config: &Config) -> CmdResult {
    let spec = build_spec(a.q, &a.h, a.t, &a.a)?;
    let cis = spec.is_cis();
    let by_rank = spec.is_cis_by_rank();
    let d = if a.distance { Some(spec.build_code().min_distance_with_budget(distance_budget(config)).map_err(err)?) } else { None };
    let mut out = Output { mismatch: !cis || cis != by_rank, ..Output::default() };
    out.line(format!("CIS: {cis}"));
    out.line(format!("rank test: {by_rank}"));
    out.line(format!("family: {}", spec.ring().family()));
    if let Some(d) = d {
        out.line(format!("d = {d}"));
    }
    out.push_json(&json!({
        "cis": cis,
        "cis_by_rank": by_rank,
        "family": spec.ring().family().label(),
        "d": d,
        "code": spec.to_record(d),
    }))?;
    Ok(out)
}

fn count(a: &CountArgs) -> CmdResult {
    let f = field(a.q)?;
    let rep = count_report(a.q, a.t, &poly(&f, &a.h)?, a.oracle).map_err(err)?;
    let mut out = Output { mismatch: rep.matches == Some(false), ..Output::default() };
    out.line(format!("h = {} ({}), factor degrees {:?}", rep.h, rep.family, rep.factor_degrees));
    out.line(format!("formula: {}", rep.formula_count));
    if let Some(o) = &rep.oracle_count {
        out.line(format!("oracle:  {o}"));
    }
    if let Some(d) = &rep.distinct_codes {
        out.line(format!("distinct codes: {d}"));
    }
    if let Some(m) = rep.matches {
        out.line(if m { "MATCH" } else { "MISMATCH" });
    }
    out.push_json(&rep)?;
    Ok(out)
}

fn bound(a: &BoundArgs) -> CmdResult {
    if a.t < 2 || a.r == 0 {
        return Err("need t >= 2 and r >= 1".into());
    }
    let target = (a.t - 1) as f64 / (a.r * a.t) as f64;
    let delta = gv_delta(a.q, a.t, a.r).map_err(err)?;
    let mut out = Output::default();
    out.line(format!("target (t-1)/(rt) = {target:.6}"));
    out.line(format!("delta = {delta:.6}"));
    let expurgation = match a.n {
        Some(n) => {
            let rep = expurgation_report(a.q, a.t, a.r, n, a.delta).map_err(err)?;
            out.line(format!("expurgation at n = {n}, delta = {:.6}: {}", rep.delta, rep.note));
            if let (Some(bad), Some(total)) = (&rep.bad_codes_bound, &rep.total_codes) {
                out.line(format!("  bad codes <= {bad}, total codes {total}"));
            }
            if let Some(s) = rep.survivor_guaranteed {
                out.line(format!("  survivor guaranteed: {s}"));
            }
            Some(rep)
        }
        None => None,
    };
    out.push_json(&json!({ "q": a.q, "t": a.t, "r": a.r, "target": target, "delta": delta, "expurgation": expurgation }))?;
    Ok(out)
}

fn shape(a: &ShapeArgs) -> CmdResult {
    let mut out = Output::default();
    match a.kind {
        ShapeKind::Qc => {
            let checks = two_factor_primes(a.q, a.nmax).map_err(err)?;
            let holding: Vec<u64> = checks.iter().filter(|c| c.holds()).map(|c| c.n).collect();
            let disagree = checks.iter().filter(|c| !c.agree()).count();
            out.mismatch = disagree > 0;
            out.line(format!("primes n <= {} with x^n - 1 = (x - 1) * irreducible over F{}: {holding:?}", a.nmax, a.q));
            out.line(format!("primitive-root test vs factorization disagreements: {disagree}"));
            for c in &checks {
                out.push_json(c)?;
            }
        }
        ShapeKind::Qt => match qt_irreducible_family(a.q, a.nmax as usize, a.e).map_err(err)? {
            Some(fam) => {
                out.line(format!("q = {}, e = {}, p = {}, alpha = {}", fam.q, fam.e, fam.p, fam.alpha));
                for (n, ok) in &fam.members {
                    out.line(format!("  x^{n} - alpha irreducible: {ok}"));
                }
                out.push_json(&fam)?;
            }
            None => {
                out.line(format!("no order e > 1 with e | q - 1 and gcd(e, (q-1)/e) = 1 for q = {}", a.q));
                out.push_json(&serde_json::Value::Null)?;
            }
        },
        ShapeKind::Binomial => {
            let f = field(a.q)?;
            let n = a.n.ok_or("shape binomial needs --n")?;
            let alpha = parse_elem(&f, a.alpha.as_deref().ok_or("shape binomial needs --alpha")?).map_err(err)?;
            let v = binomial_irreducible(&f, n, alpha).map_err(err)?;
            out.mismatch = v.irreducible != v.by_factorization;
            out.line(format!("x^{n} - {}: irreducible {} ({}); by factoring {}", f.format(alpha), v.irreducible, v.reason, v.by_factorization));
            out.push_json(&v)?;
        }
    }
    Ok(out)
}

fn read_code(path: &std::path::Path) -> Result<LinearCode, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let first = text.lines().find(|l| !l.trim().is_empty()).ok_or("empty code file")?;
    let value: serde_json::Value = serde_json::from_str(&text).or_else(|_| serde_json::from_str(first)).map_err(err)?;
    // accept a bare code, or any record that wraps one under "code"
    let code = value.get("code").cloned().unwrap_or(value);
    let rec: CodeRecord = serde_json::from_value(code).map_err(|e| format!("not a code record: {e}"))?;
    rec.to_code().map_err(err)
}

fn descend_cmd(a: &DescendArgs, config: &Config) -> CmdResult {
    let code = read_code(&a.input)?;
    let f = code.field().clone();
    let basis = if a.basis == "poly" {
        DescentBasis::polynomial(&f)
    } else {
        let elems = a.basis.split(',').map(|s| parse_elem(&f, s)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        DescentBasis::new(&f, elems)
    }
    .map_err(err)?;
    let image = descend(&code, &basis).map_err(err)?;
    let cis = image.partition_is_cis();
    let d = if a.distance { Some(image.min_distance_with_budget(distance_budget(config)).map_err(err)?) } else { None };
    let mut out = Output { mismatch: !cis, ..Output::default() };
    out.line(format!("binary image: length {}, dimension {}, {} blocks", image.length(), image.dimension(), image.partition().len()));
    out.line(format!("t-CIS: {cis}"));
    if let Some(d) = d {
        out.line(format!("d = {d}"));
    }
    out.text.push_str(&image.matrix_text());
    out.push_json(&image.to_record(d))?;
    Ok(out)
}

fn factor(a: &FactorArgs) -> CmdResult {
    let f = field(a.q)?;
    let h = poly(&f, &a.h)?;
    let fac = h.factorize().map_err(err)?;
    let separable = fac.is_squarefree();
    let mut out = Output::default();
    let mut text = format!("{h} =");
    if fac.constant.value() != 1 {
        let _ = write!(text, " {}", f.format(fac.constant.value()));
    }
    for (p, m) in &fac.factors {
        let _ = write!(text, " ({p})");
        if *m > 1 {
            let _ = write!(text, "^{m}");
        }
    }
    out.line(text);
    out.line(format!("separable: {separable}"));
    let ring = if h.is_monic() && h.degree().unwrap_or(0) >= 1 { QuotientRing::new(&h).ok() } else { None };
    let mut constituents = Vec::new();
    if let Some(ring) = &ring {
        out.line(format!("family: {}", ring.family()));
        if separable {
            let crt = ring.crt().map_err(err)?;
            for (factor, size, root) in crt.summary() {
                out.line(format!("  constituent F{size} from {factor}, root index {root}"));
                constituents.push(json!({ "factor": factor, "field_size": size, "root": root }));
            }
        }
    }
    let factors: Vec<_> = fac
        .factors
        .iter()
        .map(|(p, m)| json!({ "coeffs": p.coeffs(), "text": p.to_string(), "multiplicity": m }))
        .collect();
    out.push_json(&json!({
        "q": a.q,
        "h": h.coeffs(),
        "text": h.to_string(),
        "constant": fac.constant.value(),
        "factors": factors,
        "separable": separable,
        "family": ring.as_ref().map(|r| r.family().label()),
        "constituents": constituents,
    }))?;
    Ok(out)
}

fn z4_search_cmd(a: &Z4SearchArgs, config: &Config) -> CmdResult {
    let budget = a.budget.or(config.z4_budget).unwrap_or(Z4_BUDGET);
    let rep = z4_search(a.n, a.t, a.seed, budget, a.target).map_err(err)?;
    let mut out = Output { seed: a.seed, seed_used: true, ..Output::default() };
    out.line(format!("x^{}+1, t = {}", a.n, a.t));
    out.line(format!("best Lee distance {}", rep.best_lee));
    for (i, g) in rep.best_spec.generators().iter().enumerate() {
        out.line(format!("a_{} = {g} (digits {})", i + 1, g.digits()));
    }
    out.line(format!("tried {}", rep.candidates_tried));
    out.push_json(&rep.record())?;
    Ok(out)
}

fn z4_count(a: &Z4CountArgs) -> CmdResult {
    let rep = count_cis_z4(a.n, a.t).map_err(err)?;
    let mut out = Output::default();
    out.line(format!("{:<32} {}", "(4^n - 2^n)^(t-1)", rep.unit_formula_count));
    out.line(format!("{:<32} {}", "(2 (4^(n-1) - 2^(n-1)))^(t-1)", rep.crt_count));
    out.line(format!("{:<32} {}", "exhaustive oracle", rep.oracle_count.as_deref().unwrap_or("skipped")));
    out.line(rep.note.clone());
    out.push_json(&rep)?;
    Ok(out)
}
