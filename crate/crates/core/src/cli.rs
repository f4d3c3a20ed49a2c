//! Command-line front end. `main` forwards to [`run`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::ensemble::{Ensemble, Instance, DEFAULT_ELEMENT_CAP};
use crate::error::{Error, Result};
use crate::greens::{GreenContext, GreenWitness, Relation, SearchLimits};
use crate::harness::{build_catalog, find_suite, suite_ids, Harness, SUITES};
use crate::maps::FiniteMap;
use crate::mode::Mode;
use crate::regularity::{
    build_inner_inverse, is_idempotent, is_idempotent_characterized, is_inverse_semigroup,
    is_regular_oracle, is_regular_semigroup, regular_character_witnesses,
};
use crate::unit_regularity::{
    build_unit_inverse, is_unit_regular_oracle, is_unit_regular_semigroup, unit_regular_witnesses,
};

#[derive(Parser, Debug)]
#[command(
    name = "partsemi",
    version,
    about = "Partition-preserving transformation semigroups with prescribed characters"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// How decisions are computed; `both` fails on disagreement.
    #[arg(long, global = true, default_value = "both", value_parser = parse_mode)]
    mode: Mode,
    /// Largest number of members to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ELEMENT_CAP)]
    cap: usize,
    /// Step budget for a single characterization search.
    #[arg(long, global = true, default_value_t = SearchLimits::default().phi_cap)]
    phi_cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the members and the predicted size.
    Enumerate { instance: PathBuf },
    /// Regularity, idempotency or unit-regularity of one member, with witnesses.
    CheckElement {
        instance: PathBuf,
        #[arg(long, value_parser = parse_map)]
        f: FiniteMap,
        #[arg(long, value_enum, default_value_t = ElementProperty::Regular)]
        property: ElementProperty,
    },
    /// Regularity, inverseness or unit-regularity of the whole semigroup.
    CheckSemigroup {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = SemigroupProperty::Regular)]
        property: SemigroupProperty,
    },
    /// A Green's relation between two members, or the egg-box diagram.
    Greens {
        instance: PathBuf,
        #[arg(long, value_parser = parse_relation, required_unless_present = "egg_box")]
        rel: Option<Relation>,
        #[arg(long, value_parser = parse_map, required_unless_present = "egg_box")]
        f: Option<FiniteMap>,
        #[arg(long, value_parser = parse_map, required_unless_present = "egg_box")]
        g: Option<FiniteMap>,
        #[arg(long, conflicts_with_all = ["rel", "f", "g"])]
        egg_box: bool,
    },
    /// Run verification suites over the instance catalog.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run only these suites (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        /// List the suites and exit.
        #[arg(long)]
        list: bool,
    },
    /// The block-wise constant map with a given character.
    Lift {
        instance: PathBuf,
        #[arg(long, value_parser = parse_map)]
        alpha: FiniteMap,
        #[arg(long, value_delimiter = ',')]
        basepoints: Option<Vec<usize>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ElementProperty {
    Regular,
    Idempotent,
    UnitRegular,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SemigroupProperty {
    Regular,
    Inverse,
    UnitRegular,
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_map(s: &str) -> std::result::Result<FiniteMap, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_relation(s: &str) -> std::result::Result<Relation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a command produced: the report text and whether the verdict was positive.
struct Outcome {
    text: String,
    ok: bool,
}

/// Runs the CLI; returns the exit code (0 success, 1 negative verdict or
/// failed check, 2 input error).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            if let Some(path) = &cli.common.out {
                if let Err(e) = std::fs::write(path, &outcome.text) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return 2;
                }
            } else {
                let _ = stdout.write_all(outcome.text.as_bytes());
            }
            i32::from(!outcome.ok)
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ModeMismatch(_) | Error::Internal(_) => 1,
        _ => 2,
    }
}

fn load(path: &Path, cap: usize) -> Result<Ensemble> {
    Ensemble::with_cap(Instance::from_path(path)?, cap)
}

fn machine<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data");
    s.push('\n');
    s
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::Enumerate { instance } => enumerate(&load(instance, c.cap)?, c.format),
        Command::CheckElement {
            instance,
            f,
            property,
        } => check_element(&load(instance, c.cap)?, f, *property, c),
        Command::CheckSemigroup { instance, property } => {
            check_semigroup(&load(instance, c.cap)?, *property, c)
        }
        Command::Greens {
            instance,
            rel,
            f,
            g,
            egg_box,
        } => {
            let ens = load(instance, c.cap)?;
            let limits = SearchLimits {
                phi_cap: c.phi_cap,
                ..SearchLimits::default()
            };
            let ctx = GreenContext::with_limits(&ens, limits)?;
            if *egg_box {
                return egg_box_report(&ctx, c.format);
            }
            let (Some(rel), Some(f), Some(g)) = (rel, f, g) else {
                unreachable!("clap requires --rel, --f and --g without --egg-box");
            };
            greens(&ctx, *rel, f, g, c)
        }
        Command::Verify {
            max_n,
            seed,
            suite,
            list,
        } => {
            if *list {
                let mut text = String::new();
                for s in SUITES {
                    let _ = writeln!(text, "{:<36} {}", s.id, s.description);
                }
                return Ok(Outcome { text, ok: true });
            }
            verify(*max_n, *seed, suite, c.format)
        }
        Command::Lift {
            instance,
            alpha,
            basepoints,
        } => {
            let inst = Instance::from_path(instance)?;
            lift(&inst, alpha, basepoints.as_deref(), c.format)
        }
    }
}

fn enumerate(ens: &Ensemble, format: Format) -> Result<Outcome> {
    let predicted = ens.instance().predicted_size();
    let ok = predicted == ens.len() as u128;
    let text = match format {
        Format::Machine => machine(&json!({
            "predicted_size": predicted.to_string(),
            "count": ens.len(),
            "members": ens.members(),
        })),
        Format::Text => {
            let mut t = format!("predicted size: {predicted}\nmembers: {}\n", ens.len());
            for (i, f) in ens.members().iter().enumerate() {
                let _ = writeln!(t, "{i:>6} {f}");
            }
            t
        }
    };
    Ok(Outcome { text, ok })
}

#[derive(Serialize)]
struct ElementResult {
    property: &'static str,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_inverse: Option<FiniteMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<FiniteMap>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constructed_inverse: Option<FiniteMap>,
}

fn agree(what: &str, f: &FiniteMap, oracle: bool, theorem: bool) -> Result<()> {
    if oracle != theorem {
        return Err(Error::ModeMismatch(format!(
            "{what} for {f}: oracle says {oracle}, characterization says {theorem}"
        )));
    }
    Ok(())
}

fn inverse_property(
    name: &'static str,
    f: &FiniteMap,
    mode: Mode,
    oracle: impl FnOnce() -> Result<Option<FiniteMap>>,
    witnesses: impl FnOnce() -> Result<Vec<FiniteMap>>,
    build: impl FnOnce(&FiniteMap) -> Result<FiniteMap>,
) -> Result<ElementResult> {
    let oracle_inverse = match mode {
        Mode::Theorem => None,
        _ => Some(oracle()?),
    };
    let (witnesses, constructed) = match mode {
        Mode::Oracle => (None, None),
        _ => {
            let w = witnesses()?;
            let built = w.first().map(build).transpose()?;
            (Some(w), built)
        }
    };
    if let (Some(o), Some(w)) = (&oracle_inverse, &witnesses) {
        agree(name, f, o.is_some(), !w.is_empty())?;
    }
    let holds = match (&oracle_inverse, &witnesses) {
        (Some(o), _) => o.is_some(),
        (None, Some(w)) => !w.is_empty(),
        (None, None) => unreachable!("at least one side runs"),
    };
    Ok(ElementResult {
        property: name,
        holds,
        oracle_inverse: oracle_inverse.flatten(),
        witnesses,
        constructed_inverse: constructed,
    })
}

fn check_element(
    ens: &Ensemble,
    f: &FiniteMap,
    property: ElementProperty,
    c: &Common,
) -> Result<Outcome> {
    ens.require_member(f)?;
    let wanted = |p: ElementProperty| property == p || property == ElementProperty::All;
    let mut results = Vec::new();
    if wanted(ElementProperty::Regular) {
        results.push(inverse_property(
            "regular",
            f,
            c.mode,
            || is_regular_oracle(f, ens),
            || regular_character_witnesses(f, ens),
            |alpha| build_inner_inverse(f, alpha, ens),
        )?);
    }
    if wanted(ElementProperty::Idempotent) {
        let holds = c.mode.decide(
            &format!("idempotent for {f}"),
            || is_idempotent(f, ens),
            || is_idempotent_characterized(f, ens),
        )?;
        results.push(ElementResult {
            property: "idempotent",
            holds,
            oracle_inverse: None,
            witnesses: None,
            constructed_inverse: None,
        });
    }
    if wanted(ElementProperty::UnitRegular) {
        results.push(inverse_property(
            "unit-regular",
            f,
            c.mode,
            || is_unit_regular_oracle(f, ens),
            || unit_regular_witnesses(f, ens),
            |alpha| build_unit_inverse(f, alpha, ens),
        )?);
    }
    let ok = results.iter().all(|r| r.holds);
    let text = match c.format {
        Format::Machine => {
            machine(&json!({ "element": f, "mode": c.mode.to_string(), "results": results }))
        }
        Format::Text => {
            let mut t = format!("element {f} (mode {})\n", c.mode);
            for r in &results {
                let _ = writeln!(t, "{}: {}", r.property, yes(r.holds));
                if let Some(g) = &r.oracle_inverse {
                    let _ = writeln!(t, "  inverse found by search: {g}");
                }
                if let Some(w) = &r.witnesses {
                    let list: Vec<String> = w.iter().map(ToString::to_string).collect();
                    let _ = writeln!(
                        t,
                        "  character witnesses: {}",
                        if list.is_empty() {
                            "none".into()
                        } else {
                            list.join(" ")
                        }
                    );
                }
                if let Some(g) = &r.constructed_inverse {
                    let _ = writeln!(t, "  inverse built from the first witness: {g}");
                }
            }
            t
        }
    };
    Ok(Outcome { text, ok })
}

fn check_semigroup(ens: &Ensemble, property: SemigroupProperty, c: &Common) -> Result<Outcome> {
    let (name, holds) = match property {
        SemigroupProperty::Regular => ("regular", is_regular_semigroup(ens, c.mode)?),
        SemigroupProperty::Inverse => ("inverse", is_inverse_semigroup(ens, c.mode)?),
        SemigroupProperty::UnitRegular => ("unit-regular", is_unit_regular_semigroup(ens, c.mode)?),
    };
    let text = match c.format {
        Format::Machine => machine(&json!({
            "property": name,
            "mode": c.mode.to_string(),
            "members": ens.len(),
            "holds": holds,
        })),
        Format::Text => format!(
            "{name} semigroup: {} (mode {}, {} members)\n",
            yes(holds),
            c.mode,
            ens.len()
        ),
    };
    Ok(Outcome { text, ok: holds })
}

fn witness_text(w: &GreenWitness) -> String {
    let mut t = format!("  source: {}\n", w.source);
    let named = [
        ("alpha", &w.alpha),
        ("beta", &w.beta),
        ("gamma", &w.gamma),
        ("delta", &w.delta),
        ("middle", &w.middle),
    ];
    for (name, value) in named {
        if let Some(v) = value {
            let _ = writeln!(t, "  {name}: {v}");
        }
    }
    if let Some(pairs) = &w.class_pairing {
        for (a, b) in pairs {
            let _ = writeln!(t, "  class {a:?} -> {b:?}");
        }
    }
    for (name, m) in [("phi", &w.phi), ("psi", &w.psi)] {
        if let Some(m) = m {
            let arrows: Vec<String> = m
                .domain
                .iter()
                .map(|&x| format!("{x}->{}", m.apply(x).expect("in domain")))
                .collect();
            let _ = writeln!(t, "  {name}: {}", arrows.join(" "));
        }
    }
    for eq in &w.equations {
        let factors: Vec<String> = eq.factors.iter().map(ToString::to_string).collect();
        let _ = writeln!(t, "  {} = {}", eq.target, factors.join(" * "));
    }
    t
}

fn greens(
    ctx: &GreenContext,
    rel: Relation,
    f: &FiniteMap,
    g: &FiniteMap,
    c: &Common,
) -> Result<Outcome> {
    let witness = ctx.related(rel, f, g, c.mode)?;
    let related = witness.is_some();
    let text = match c.format {
        Format::Machine => machine(&json!({
            "relation": rel,
            "f": f,
            "g": g,
            "mode": c.mode.to_string(),
            "related": related,
            "witness": witness,
        })),
        Format::Text => {
            let mut t = format!("{f} {rel} {g}: {} (mode {})\n", yes(related), c.mode);
            if let Some(w) = &witness {
                t.push_str(&witness_text(w));
            }
            t
        }
    };
    Ok(Outcome { text, ok: related })
}

fn egg_box_report(ctx: &GreenContext, format: Format) -> Result<Outcome> {
    let b = ctx.egg_box()?;
    let ens = ctx.ensemble();
    let text = match format {
        Format::Machine => machine(&json!({ "egg_box": b, "members": ens.members() })),
        Format::Text => {
            let mut t = format!(
                "{} members, {} D-classes (* marks idempotents)\n",
                ens.len(),
                b.classes.len()
            );
            t.push_str(&b.to_text());
            t.push_str("members:\n");
            for (i, f) in ens.members().iter().enumerate() {
                let _ = writeln!(t, "{i:>6} {f}");
            }
            t
        }
    };
    Ok(Outcome { text, ok: true })
}

fn verify(max_n: usize, seed: u64, suites: &[String], format: Format) -> Result<Outcome> {
    for s in suites {
        if find_suite(s).is_none() {
            return Err(Error::InvalidArgument(format!(
                "unknown suite {s:?}; known suites: {}",
                suite_ids().collect::<Vec<_>>().join(", ")
            )));
        }
    }
    let harness = Harness::new(build_catalog(max_n, seed)?)?;
    let ids: Vec<&str> = if suites.is_empty() {
        suite_ids().collect()
    } else {
        suites.iter().map(String::as_str).collect()
    };
    let mut text = String::new();
    let mut failed = 0;
    if format == Format::Text {
        let _ = writeln!(
            text,
            "catalog: max_n={max_n} seed={seed} instances={}",
            harness.catalog().len()
        );
    }
    for id in &ids {
        let report = harness.run_suite(id)?;
        if !report.passed() {
            failed += 1;
        }
        match format {
            Format::Machine => text.push_str(&report.to_machine()),
            Format::Text => text.push_str(&report.to_text()),
        }
    }
    if format == Format::Text {
        if failed == 0 {
            let _ = writeln!(text, "all {} suites passed", ids.len());
        } else {
            let _ = writeln!(text, "{failed} of {} suites failed", ids.len());
        }
    }
    Ok(Outcome {
        text,
        ok: failed == 0,
    })
}

fn lift(
    inst: &Instance,
    alpha: &FiniteMap,
    basepoints: Option<&[usize]>,
    format: Format,
) -> Result<Outcome> {
    let p = inst.partition();
    let f = p.lift_character(alpha, basepoints)?;
    let member = inst.contains(&f)?;
    let text = match format {
        Format::Machine => machine(&json!({ "alpha": alpha, "lift": f, "member": member })),
        Format::Text => format!(
            "lift of {alpha}: {f}\ncharacter: {}\nmember: {}\n",
            p.character(&f)?,
            yes(member)
        ),
    };
    Ok(Outcome { text, ok: true })
}
