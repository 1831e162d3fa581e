//! Deterministic command-line front end: enumeration, counting, modular
//! matrices, the count-one table scan, and the full invariant suite, with
//! JSON / CSV / text output.
//!
//! Exit codes: 0 success (all checks pass), 1 check failure, 2 usage error.

use admissible::admissible::{enumerate_admissible, validate_level};
use admissible::modular::{daha_matrices, intertwiner_comparison, kw_matrices, sl2z_residuals};
use admissible::report::{matrix_records, weight_record, CountRecord, TableHitRecord};
use admissible::rootdata::{build_root_system, levi_datum, levi_fixture, CartanKind, LeviDatum, RootSystem};
use admissible::spaltenstein::{
    brute_force_levi_count, count_closed_form, levi_restrict_classes, table1_scan,
};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "admissible", version, about = "Boundary admissible weights, alcove fixed points, and modular data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct CaseArgs {
    /// Root system, e.g. A1, B3, E7.
    kind: String,
    /// Denominator u of the boundary level k + h = h/u.
    u: i64,
    /// Levi subset: comma-separated Bourbaki node indices ("1,3,4"),
    /// or a named fixture ("fixture:principal", "fixture:A6",
    /// "fixture:blocks").
    #[arg(long)]
    levi: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the root-system data for a type.
    Roots { kind: String },
    /// Enumerate admissible classes, weights and anomalies.
    Adm(CaseArgs),
    /// Enumerate the alcove fixed points (optionally Levi-restricted).
    Fixedpoints(CaseArgs),
    /// Count Levi-restricted classes via the closed form (and brute force
    /// when within the gate).
    Count(CaseArgs),
    /// Build the modular matrices; with --check also print all residuals.
    Modular {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        check: bool,
    },
    /// Scan all types and shipped Levi fixtures for count-one rows.
    Table1 {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        #[arg(long, default_value_t = 13)]
        max_u: i64,
    },
    /// Run the full invariant suite; exit 0 iff every check passes.
    Verify {
        #[command(flatten)]
        case: CaseArgs,
        /// Multiply every tolerance threshold by this factor.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
    },
}

fn parse_levi(rs: &RootSystem, spec: &str, u: i64) -> Result<LeviDatum> {
    if let Some(name) = spec.strip_prefix("fixture:") {
        return Ok(levi_fixture(rs, name, u)?);
    }
    let mut idx = Vec::new();
    for part in spec.split(',').filter(|s| !s.is_empty()) {
        let i: usize = part
            .trim()
            .parse()
            .with_context(|| format!("bad levi index `{part}`"))?;
        if i == 0 {
            bail!("levi indices are 1-based Bourbaki node numbers");
        }
        idx.push(i - 1);
    }
    Ok(levi_datum(rs, &idx)?)
}

fn rat_str(x: admissible::Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Roots { kind } => {
            let rs = build_root_system(CartanKind::parse(&kind)?);
            cmd_roots(&rs, cli.format)
        }
        Command::Adm(case) => cmd_adm(&case, cli.format),
        Command::Fixedpoints(case) => cmd_fixedpoints(&case, cli.format),
        Command::Count(case) => cmd_count(&case, cli.format),
        Command::Modular { case, check } => cmd_modular(&case, check, cli.format),
        Command::Table1 { max_rank, max_u } => cmd_table1(max_rank, max_u, cli.format),
        Command::Verify { case, tol_scale } => cmd_verify(&case, tol_scale, cli.format),
    }
}

fn cmd_roots(rs: &RootSystem, format: Format) -> Result<i32> {
    #[derive(serde::Serialize)]
    struct RootsRecord {
        kind: String,
        rank: usize,
        cartan: Vec<Vec<i64>>,
        marks: Vec<i64>,
        comarks: Vec<i64>,
        coxeter: i64,
        dual_coxeter: i64,
        lacing: i64,
        m: i64,
        e: i64,
        minuscule_nodes: Vec<usize>,
        exponents: Vec<i64>,
        weyl_order: u128,
        positive_roots: usize,
        rho_norm_sq: [i64; 2],
    }
    let rec = RootsRecord {
        kind: rs.kind.to_string(),
        rank: rs.rank(),
        cartan: rs.cartan.clone(),
        marks: rs.marks.clone(),
        comarks: rs.comarks.clone(),
        coxeter: rs.coxeter,
        dual_coxeter: rs.dual_coxeter,
        lacing: rs.lacing,
        m: rs.m,
        e: rs.e,
        minuscule_nodes: rs.j_set.iter().map(|&i| i + 1).collect(),
        exponents: rs.exponents.clone(),
        weyl_order: rs.weyl_order,
        positive_roots: rs.pos_roots.len(),
        rho_norm_sq: [*rs.rho_sq.numer(), *rs.rho_sq.denom()],
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rec)?),
        _ => {
            println!("{}: rank {}", rec.kind, rec.rank);
            println!("  h = {}, h^vee = {}, r^vee = {}", rec.coxeter, rec.dual_coxeter, rec.lacing);
            println!("  e = |P^vee/Q^vee| = {}, m = {}", rec.e, rec.m);
            println!("  marks    {:?}", rec.marks);
            println!("  comarks  {:?}", rec.comarks);
            println!("  exponents {:?}, |W| = {}", rec.exponents, rec.weyl_order);
            println!("  |Phi_+| = {}, |rho|^2 = {}/{}", rec.positive_roots, rec.rho_norm_sq[0], rec.rho_norm_sq[1]);
        }
    }
    Ok(0)
}

fn cmd_adm(case: &CaseArgs, format: Format) -> Result<i32> {
    let rs = build_root_system(CartanKind::parse(&case.kind)?);
    let lv = validate_level(&rs, case.u)?;
    let classes = enumerate_admissible(&rs, &lv)?;
    let records: Vec<_> = classes.iter().map(|c| weight_record(&rs, &lv, c)).collect();
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&records)?),
        Format::Csv => {
            println!("class_id,b,b_minus,u_b_word,length,epsilon,weight,anomaly");
            for r in &records {
                let join = |v: &[admissible::report::Rat]| {
                    v.iter()
                        .map(|x| format!("{}/{}", x.0, x.1))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                println!(
                    "{},{},{},{},{},{},{},{}/{}",
                    r.class_id,
                    join(&r.b),
                    join(&r.b_minus),
                    r.u_b_word.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                    r.length,
                    r.epsilon,
                    join(&r.weight),
                    r.anomaly.0,
                    r.anomaly.1
                );
            }
        }
        Format::Text => {
            println!(
                "{} u={}: k = {}, {} classes, {} members",
                rs.kind,
                lv.u,
                rat_str(lv.k),
                classes.len(),
                classes.iter().map(|c| c.orbit.len()).sum::<usize>()
            );
            for c in &classes {
                let w: Vec<String> = c.weight.pairings.iter().map(|&x| rat_str(x)).collect();
                println!(
                    "  class {:3}: b = ({}), weight = ({}), s = {}",
                    c.class_id,
                    c.rep.b.0.iter().map(|&x| rat_str(x)).collect::<Vec<_>>().join(", "),
                    w.join(", "),
                    rat_str(admissible::admissible::anomaly(&rs, &lv, &c.weight))
                );
            }
        }
    }
    Ok(0)
}

fn cmd_fixedpoints(case: &CaseArgs, format: Format) -> Result<i32> {
    let rs = build_root_system(CartanKind::parse(&case.kind)?);
    let lv = validate_level(&rs, case.u)?;
    let classes = enumerate_admissible(&rs, &lv)?;
    let selected = match &case.levi {
        Some(spec) => {
            let levi = parse_levi(&rs, spec, case.u)?;
            levi_restrict_classes(&rs, &lv, &levi, &classes)?
        }
        None => classes,
    };
    let records: Vec<_> = selected.iter().map(|c| weight_record(&rs, &lv, c)).collect();
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&records)?),
        _ => {
            println!("{} u={}: {} fixed-point classes", rs.kind, lv.u, selected.len());
            for c in &selected {
                println!(
                    "  class {:3}: b = ({}), u_b word {:?}, l(pi) = {}",
                    c.class_id,
                    c.rep.b.0.iter().map(|&x| rat_str(x)).collect::<Vec<_>>().join(", "),
                    c.rep.u_word.iter().map(|&i| i + 1).collect::<Vec<_>>(),
                    c.rep.length_pi(&rs),
                );
            }
        }
    }
    Ok(0)
}

fn cmd_count(case: &CaseArgs, format: Format) -> Result<i32> {
    let rs = build_root_system(CartanKind::parse(&case.kind)?);
    let lv = validate_level(&rs, case.u)?;
    let spec = case.levi.as_deref().unwrap_or("fixture:principal");
    let levi = parse_levi(&rs, spec, case.u)?;
    let closed = count_closed_form(&rs, &lv, &levi)?;
    let brute = brute_force_levi_count(&rs, &lv, &levi).ok();
    let rec = CountRecord {
        kind: rs.kind.to_string(),
        u: lv.u,
        levi: levi.subset.iter().map(|&i| i + 1).collect(),
        levi_components: levi.components.iter().map(|c| c.to_string()).collect(),
        exponents: levi.exponents.clone(),
        weyl_order: levi.weyl_order,
        closed_form: closed,
        brute_force: brute,
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rec)?),
        _ => {
            println!(
                "{} u={} levi {:?} ({}): closed_form = {}{}",
                rec.kind,
                rec.u,
                rec.levi,
                rec.levi_components.join(" x "),
                rec.closed_form,
                match rec.brute_force {
                    Some(b) => format!(", brute_force = {b}"),
                    None => ", brute_force skipped (gate)".into(),
                }
            );
        }
    }
    if let Some(b) = brute {
        if b != closed {
            return Ok(1);
        }
    }
    Ok(0)
}

fn cmd_modular(case: &CaseArgs, check: bool, format: Format) -> Result<i32> {
    let rs = build_root_system(CartanKind::parse(&case.kind)?);
    let lv = validate_level(&rs, case.u)?;
    let classes = enumerate_admissible(&rs, &lv)?;
    if classes.len() > 512 {
        bail!("matrix dimension {} beyond the desk-scale gate", classes.len());
    }
    let kw = kw_matrices(&rs, &lv, &classes);
    let daha = daha_matrices(&rs, &lv, &classes);

    let mut residuals = std::collections::BTreeMap::new();
    if check {
        let r = sl2z_residuals(&rs, &lv, &classes, &kw);
        residuals.insert("kw_st3_vs_s2".into(), r.st3_vs_s2);
        residuals.insert("kw_st3_vs_s2_source_t".into(), r.st3_vs_s2_raw);
        residuals.insert("kw_s4_vs_id".into(), r.s4_vs_id);
        residuals.insert("kw_s_unitarity_dev".into(), r.s_unitary_dev);
        let rd = sl2z_residuals(&rs, &lv, &classes, &daha);
        residuals.insert(
            "daha_normalized_s2_perm_dev".into(),
            rd.normalized_s2_perm_dev.unwrap_or(f64::NAN),
        );
        let cmp = intertwiner_comparison(&rs, &lv, &classes, &kw, &daha);
        residuals.insert("ratio_max_deviation".into(), cmp.max_deviation);
        residuals.insert("ratio_a_re".into(), cmp.ratio_constant.re);
        residuals.insert("ratio_a_im".into(), cmp.ratio_constant.im);
        residuals.insert("ratio_mod_sq_times_ul".into(), cmp.modulus_sq_times_ul);
        residuals.insert("literal_variant_max_deviation".into(), cmp.literal_max_deviation);
        let c = admissible::modular::t_relation_constant(&rs).value();
        residuals.insert("t_relation_dev".into(), daha.t.max_abs_diff(&kw.t.scale(c)));
    }

    match format {
        Format::Json => {
            let mut recs =
                matrix_records(&rs, &lv, &kw, if check { Some(residuals.clone()) } else { None });
            recs.extend(matrix_records(&rs, &lv, &daha, None));
            println!("{}", serde_json::to_string_pretty(&recs)?);
        }
        Format::Csv => {
            println!("flavor,i,j,s_re,s_im,t_re,t_im");
            for (name, m) in [("kw", &kw), ("daha", &daha)] {
                for i in 0..m.s.rows {
                    for j in 0..m.s.cols {
                        println!(
                            "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e}",
                            name,
                            i,
                            j,
                            m.s.at(i, j).re,
                            m.s.at(i, j).im,
                            m.t.at(i, j).re,
                            m.t.at(i, j).im
                        );
                    }
                }
            }
        }
        Format::Text => {
            println!(
                "{} u={}: {} x {} matrices (kw + daha)",
                rs.kind,
                lv.u,
                classes.len(),
                classes.len()
            );
            for (k, v) in &residuals {
                println!("  {k} = {v:.3e}");
            }
        }
    }
    Ok(0)
}

fn cmd_table1(max_rank: usize, max_u: i64, format: Format) -> Result<i32> {
    let hits = table1_scan(max_rank, max_u);
    let recs: Vec<TableHitRecord> = hits
        .iter()
        .map(|h| TableHitRecord {
            kind: h.kind.to_string(),
            u: h.u,
            fixture: h.fixture.clone(),
            count: h.count,
        })
        .collect();
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&recs)?),
        _ => {
            println!("count-one rows up to rank {max_rank}, u <= {max_u}:");
            for r in &recs {
                println!("  {} u={} {}", r.kind, r.u, r.fixture);
            }
        }
    }
    Ok(0)
}

fn cmd_verify(case: &CaseArgs, tol_scale: f64, format: Format) -> Result<i32> {
    let rs = build_root_system(CartanKind::parse(&case.kind)?);
    let levi = match &case.levi {
        Some(spec) => Some(parse_levi(&rs, spec, case.u)?),
        None => None,
    };
    let checks = admissible::verify::run_case_with(
        rs,
        case.u,
        levi.as_ref(),
        admissible::verify::Tolerances { scale: tol_scale },
    )?;
    let all = checks.iter().all(|c| c.passed);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&checks)?),
        _ => {
            for c in &checks {
                println!(
                    "{} {} {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            println!("{}", if all { "all checks passed" } else { "CHECK FAILURES" });
        }
    }
    Ok(if all { 0 } else { 1 })
}
