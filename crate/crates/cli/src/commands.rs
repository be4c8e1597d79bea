use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use relthue::binomial::{batch, solve_binomial, BinomialInstance, Constraints};
use relthue::fixtures::{parse_binomial_table, FixturePair, BINOMIAL_PAIRS, SEXTIC_FIELDS};
use relthue::par;
use relthue::quartic_pib::{dedup_families, generators_from_pair, verify_generator, PIBGeneratorFamily};
use relthue::relthue::{solve_small, EquationSpec, SolutionPair, SolveOutcome, Status};
use relthue::sextic::{parse_record, parse_records, solve_record, verify_published, Published, SexticFieldRecord};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{emit, json_document, Table};
use crate::{BinomialArgs, Verdict};

fn verdict(flagged: bool) -> Verdict {
    if flagged {
        Verdict::Flagged
    } else {
        Verdict::Ok
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn solve(cfg: &RunConfig, spec: &Path) -> Result<Verdict> {
    let specs = EquationSpec::parse_many(&read(spec)?).with_context(|| format!("parsing {}", spec.display()))?;
    let equations = specs.iter().map(|s| s.equation()).collect::<relthue::Result<Vec<_>>>()?;
    let base = cfg.search()?;
    let start = Instant::now();
    let jobs: Vec<_> = specs.iter().zip(&equations).collect();
    let outcomes = par::map(jobs, base.workers, |(s, eq)| {
        let mut c = base.clone();
        if let Some(b) = s.bound_log10 {
            c.size_bound_log10 = b;
        }
        solve_small(eq, &c)
    });
    eprintln!("solved {} equation(s) in {:.2?}", equations.len(), start.elapsed());

    let mut records = Vec::new();
    let mut table = Table::new(&["index", "equation", "status", "x", "y", "achieved_unit"]);
    let mut flagged = false;
    for (i, (eq, out)) in equations.iter().zip(outcomes).enumerate() {
        let out = out?;
        flagged |= out.status == Status::Incomplete;
        let g = eq.poly().to_string();
        for s in &out.solutions {
            table.push(vec![i.to_string(), g.clone(), status(&out), s.x.to_string(), s.y.to_string(), s.unit.to_string()]);
        }
        #[derive(Serialize)]
        struct Body<'a> {
            index: usize,
            field: relthue::qfield::IQField,
            equation: String,
            #[serde(flatten)]
            outcome: &'a SolveOutcome,
        }
        records.push(json_document("solve", cfg, &Body { index: i, field: eq.field(), equation: g, outcome: &out })?);
    }
    emit(cfg, &records, &table)?;
    Ok(verdict(flagged))
}

fn status(out: &SolveOutcome) -> String {
    match out.status {
        Status::Complete => "complete".into(),
        Status::Incomplete => "incomplete".into(),
    }
}

#[derive(Serialize)]
struct PairWithGenerators {
    #[serde(flatten)]
    pair: SolutionPair,
    generators: Vec<PIBGeneratorFamily>,
}

fn with_generators(d: u64, m: u64, sols: &[SolutionPair]) -> Result<Vec<PairWithGenerators>> {
    let field = relthue::binomial::supported_field(d)?;
    sols.iter()
        .map(|s| {
            let fams = generators_from_pair(&s.x, &s.y, field, m)?;
            Ok(PairWithGenerators { pair: s.clone(), generators: dedup_families(&fams) })
        })
        .collect()
}

pub fn binomial(cfg: &RunConfig, args: &BinomialArgs) -> Result<Verdict> {
    let search = cfg.search()?;
    let constraints = Constraints {
        require_coprime_dm: args.require_coprime,
        require_m_mod4_in_23: args.require_mod4,
        require_squarefree: args.require_squarefree,
    };
    let d = args.d;
    let mut table = Table::new(&["d", "m", "x0", "y0", "achieved_unit", "generator_families"]);
    let start = Instant::now();
    if let Some(m) = args.m {
        let inst = BinomialInstance::new(d, m, constraints)?;
        let out = solve_binomial(&inst, &search)?;
        eprintln!("d={d} m={m}: {} in {:.2?}", status(&out), start.elapsed());
        let sols = with_generators(d, m, &out.solutions)?;
        for s in &sols {
            let p = &s.pair;
            table.push(vec![
                d.to_string(),
                m.to_string(),
                p.x.to_string(),
                p.y.to_string(),
                p.unit.to_string(),
                s.generators.len().to_string(),
            ]);
        }
        let body = json!({
            "d": d,
            "m": m,
            "status": out.status,
            "solutions": sols,
            "reduction": out.reduction,
            "enum_box": out.enum_box.as_ref().map(|b| b.to_string()),
            "note": out.note,
        });
        emit(cfg, &[json_document("binomial", cfg, &body)?], &table)?;
        return Ok(verdict(out.status == Status::Incomplete));
    }

    let m_max = args.m_max.expect("clap requires --m or --m-max");
    let progress = |done: usize, total: usize| {
        if done % 100 == 0 || done == total {
            eprintln!("reduced {done}/{total}");
        }
    };
    let rep = batch(d, m_max, &constraints, &search, &progress)?;
    eprintln!(
        "reductions {:.2?}, sweep of box {} {:.2?}, total {:.2?}",
        rep.timing.reduction,
        rep.enum_box,
        rep.timing.sweep,
        start.elapsed()
    );
    let mut rows = Vec::new();
    for row in &rep.table {
        let sols = with_generators(d, row.m, &row.solutions)?;
        for s in &sols {
            let p = &s.pair;
            table.push(vec![
                d.to_string(),
                row.m.to_string(),
                p.x.to_string(),
                p.y.to_string(),
                p.unit.to_string(),
                s.generators.len().to_string(),
            ]);
        }
        rows.push(json!({ "m": row.m, "solutions": sols }));
    }
    let mut body = serde_json::to_value(&rep)?;
    body["table"] = serde_json::Value::Array(rows);
    emit(cfg, &[json_document("binomial", cfg, &body)?], &table)?;
    Ok(verdict(!rep.incomplete.is_empty()))
}

pub fn sextic(cfg: &RunConfig, input: Option<&Path>, verify_only: bool) -> Result<Verdict> {
    let text = match input {
        Some(p) => read(p)?,
        None => SEXTIC_FIELDS.to_string(),
    };
    let recs = parse_records(&text).context("parsing sextic records")?;
    let search = cfg.search()?;
    let start = Instant::now();
    let solved = if verify_only {
        Vec::new()
    } else {
        par::map(recs.iter().collect(), search.workers, |r| solve_record(r, &search))
    };
    if !verify_only {
        eprintln!("solved {} record(s) in {:.2?}", recs.len(), start.elapsed());
    }

    let mut flagged = false;
    let mut out = Vec::new();
    let mut table = Table::new(&["d_k", "kind", "x1", "x2", "y1", "y2", "result", "unit"]);
    for (i, rec) in recs.iter().enumerate() {
        let mut checks = Vec::new();
        if let Published::Tuples(ts) = &rec.published {
            for t in ts {
                let v = verify_published(rec, t.projection());
                flagged |= !v.ok;
                let [x1, x2, y1, y2] = t.projection().map(|x| x.to_string());
                let result = if v.ok { "ok" } else { "FAILED" };
                table.push(vec![rec.d_k.to_string(), "published".into(), x1, x2, y1, y2, result.into(), v.unit.to_string()]);
                checks.push(json!({ "tuple": t, "ok": v.ok, "unit": v.unit }));
            }
        }
        let mut entry = json!({
            "d_k": rec.d_k,
            "record": rec.to_line(),
            "published": rec.published,
            "verification": checks,
        });
        if let Some(res) = solved.get(i) {
            let sol = res.as_ref().map_err(|e| anyhow::anyhow!("D_K={}: {e}", rec.d_k))?;
            flagged |= sol.status == Status::Incomplete;
            let st = status(&sol.outcome);
            for c in sol.nontrivial() {
                let unit = verify_published_big(rec, c);
                table.push(vec![
                    rec.d_k.to_string(),
                    "candidate".into(),
                    c.x1.to_string(),
                    c.x2.to_string(),
                    c.y1.to_string(),
                    c.y2.to_string(),
                    st.clone(),
                    unit,
                ]);
            }
            let missing: Vec<_> = match &rec.published {
                Published::Tuples(ts) => ts
                    .iter()
                    .filter(|t| !sol.candidates.iter().any(|c| c.matches(&t.projection())))
                    .collect(),
                _ => Vec::new(),
            };
            flagged |= !missing.is_empty();
            entry["status"] = json!(sol.status);
            entry["candidates"] = json!(sol.nontrivial().collect::<Vec<_>>());
            entry["orbits"] = json!(sol.outcome.solutions);
            entry["missing_published"] = json!(missing);
            entry["reduction"] = json!(sol.outcome.reduction);
            entry["enum_box"] = json!(sol.outcome.enum_box.as_ref().map(|b| b.to_string()));
        }
        out.push(entry);
    }
    let body = json!({ "verify_only": verify_only, "records": out });
    emit(cfg, &[json_document("sextic", cfg, &body)?], &table)?;
    Ok(verdict(flagged))
}

fn verify_published_big(rec: &SexticFieldRecord, c: &relthue::sextic::PIBCandidate) -> String {
    let x = rec.field.int(c.x1.clone(), c.y1.clone());
    let y = rec.field.int(c.x2.clone(), c.y2.clone());
    relthue::sextic::rho_poly(rec).homogeneous_value(&x, &y).to_string()
}

/// A `key=value` restriction on fixture rows.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Filter {
    D(String),
    M(u64),
    Dk(i64),
}

fn parse_filters(raw: &[String]) -> Result<Vec<Filter>> {
    raw.iter()
        .flat_map(|s| s.split(','))
        .map(|f| {
            let (k, v) = f.split_once('=').with_context(|| format!("filter '{f}' is not key=value"))?;
            let v = v.trim();
            Ok(match k.trim() {
                "d" => Filter::D(v.to_string()),
                "m" => Filter::M(v.parse().with_context(|| format!("filter m={v}"))?),
                "dk" | "D_K" => Filter::Dk(v.parse().with_context(|| format!("filter dk={v}"))?),
                other => bail!("unknown filter key '{other}' (expected d, m or dk)"),
            })
        })
        .collect()
}

/// Keep table lines whose field tag and `m` pass the filters. A `d` filter
/// matches the tag as written, so `d=163` selects rows listed for that
/// field only and `d=*` selects the rows shared by all fields.
fn filter_binomial_lines(text: &str, filters: &[Filter]) -> String {
    let keep = |line: &str| {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            return false;
        }
        let head = t.split(':').next().unwrap_or("");
        let mut words = head.split_whitespace();
        let tag = words.next().unwrap_or("");
        let m: Option<u64> = words.next().and_then(|m| m.parse().ok());
        filters.iter().all(|f| match f {
            Filter::D(d) => tag == d,
            Filter::M(x) => m == Some(*x),
            Filter::Dk(_) => false,
        })
    };
    text.lines().filter(|l| keep(l)).map(|l| format!("{l}\n")).collect()
}

fn sextic_passes(rec: &SexticFieldRecord, filters: &[Filter]) -> bool {
    filters.iter().all(|f| match f {
        Filter::D(d) => d == &rec.field.d().to_string(),
        Filter::M(_) => false,
        Filter::Dk(k) => *k == rec.d_k,
    })
}

#[derive(Serialize)]
struct Check {
    check: &'static str,
    item: String,
    ok: bool,
    detail: String,
}

pub fn verify_fixtures(
    cfg: &RunConfig,
    raw_filters: &[String],
    binomial_table: Option<&Path>,
    sextic_table: Option<&Path>,
) -> Result<Verdict> {
    let filters = parse_filters(raw_filters)?;
    let btext = match binomial_table {
        Some(p) => read(p)?,
        None => BINOMIAL_PAIRS.to_string(),
    };
    let stext = match sextic_table {
        Some(p) => read(p)?,
        None => SEXTIC_FIELDS.to_string(),
    };
    let btext = filter_binomial_lines(&btext, &filters);
    let pairs = parse_binomial_table(&btext).context("parsing binomial table")?;
    let records: Vec<SexticFieldRecord> = parse_records(&stext)
        .context("parsing sextic table")?
        .into_iter()
        .filter(|r| sextic_passes(r, &filters))
        .collect();

    let mut checks = Vec::new();
    for p in &pairs {
        checks.extend(check_pair(p));
    }
    for rec in &records {
        let back = parse_record(&rec.to_line());
        checks.push(Check {
            check: "sextic_round_trip",
            item: format!("D_K={}", rec.d_k),
            ok: back.as_ref() == Ok(rec),
            detail: match back {
                Ok(_) => String::new(),
                Err(e) => e.to_string(),
            },
        });
        if let Published::Tuples(ts) = &rec.published {
            for t in ts {
                let v = verify_published(rec, t.projection());
                checks.push(Check {
                    check: "sextic_tuple_unit",
                    item: format!("D_K={} {:?}", rec.d_k, t.projection()),
                    ok: v.ok,
                    detail: format!("norm {}", v.unit),
                });
            }
        }
    }

    let failures: Vec<&Check> = checks.iter().filter(|c| !c.ok).collect();
    for f in &failures {
        eprintln!("mismatch: {} {}: {}", f.check, f.item, f.detail);
    }
    eprintln!("{} check(s), {} mismatch(es)", checks.len(), failures.len());
    let mut table = Table::new(&["check", "item", "ok", "detail"]);
    for c in &checks {
        table.push(vec![c.check.into(), c.item.clone(), c.ok.to_string(), c.detail.clone()]);
    }
    let body = json!({
        "filters": raw_filters,
        "binomial_pairs": pairs.len(),
        "sextic_records": records.len(),
        "checks": checks.len(),
        "mismatches": failures,
        "results": checks,
    });
    emit(cfg, &[json_document("verify-fixtures", cfg, &body)?], &table)?;
    Ok(verdict(!failures.is_empty()))
}

fn check_pair(p: &FixturePair) -> Vec<Check> {
    let item = format!("d={} m={} ({}, {})", p.d, p.m, p.x, p.y);
    let v = p.value();
    let mut out = vec![Check {
        check: "binomial_pair_unit",
        item: item.clone(),
        ok: v.is_unit(),
        detail: format!("X0^4 - m*Y0^4 = {v}"),
    }];
    if !v.is_unit() {
        return out;
    }
    let field = p.x.field();
    let m = num_bigint::BigInt::from(p.m);
    let fams = generators_from_pair(&p.x, &p.y, field, p.m).unwrap_or_default();
    let bad = fams.iter().filter(|f| !verify_generator(&f.x, &f.y, &f.z, &m, field)).count();
    out.push(Check {
        check: "generator_conditions",
        item,
        ok: !fams.is_empty() && bad == 0,
        detail: format!("{} families, {bad} failing", fams.len()),
    });
    out
}
