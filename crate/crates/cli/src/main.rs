use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jordpack_core::antipodes::{exists_antipodal_packet, packet_level_antipodes, AntipodesVerdict};
use jordpack_core::compgroup::GroupSummary;
use jordpack_core::fixtures::{parse_fixtures, verify};
use jordpack_core::jordan::format_family_and_set;
use jordpack_core::packets::{
    build_element, build_packet, ElementReport, PacketElement, PacketEntry, Selection,
};
use jordpack_core::reducibility::{
    jord_line_from_reducibility, reducibility_table, segment_induction_reducible,
};
use jordpack_core::registry::BUILTIN_TOML;
use jordpack_core::speh::{expansion_stats, speh_determinant};
use jordpack_core::unramified::{count_with, enumerate_sn_params, is_isolated, param_to_jordan};
use jordpack_core::{
    ComponentGroup, Error, GroupFamily, GroupKind, HalfInt, IsolationConstraint, QuadChar,
    QuadCharSpace, Registry, Result, Segment, Sign,
};

/// Version of the JSON field set.
const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "jordpack",
    version,
    about = "Jordan blocks, component groups, packets and unramified counts for Sp(2n) and SO(2n+1)"
)]
struct Cli {
    /// Registry TOML file (labels, reducibility data, fixtures). Defaults to the built-in one.
    #[arg(long, global = true, env = "JORDPACK_REGISTRY")]
    registry: Option<PathBuf>,

    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count strongly negative (or isolated) unramified representations.
    Count {
        #[arg(long, value_parser = parse_kind)]
        family: GroupKind,
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        isolated: bool,
    },
    /// List the pairs of partitions behind `count`, for small ranks.
    Enumerate {
        #[arg(long, value_parser = parse_kind)]
        family: GroupKind,
        #[arg(long)]
        rank: u32,
        /// Only the isolated ones.
        #[arg(long)]
        isolated: bool,
        /// Also print each Jordan set.
        #[arg(long)]
        jordan: bool,
    },
    /// Build the packet of a Jordan set, e.g. "Sp4: triv:1, triv:3, triv:5".
    Packet {
        jord: String,
        /// Component-group basis element such as "triv:1 triv:3" (repeat for each).
        #[arg(long)]
        basis: Vec<String>,
        /// Only the member with these signs on the basis, e.g. "+-".
        #[arg(long)]
        character: Option<String>,
    },
    /// List characters of the component group, or describe one.
    Character {
        jord: String,
        #[arg(long)]
        basis: Vec<String>,
        /// Signs on the basis, e.g. "+-".
        #[arg(long)]
        signs: Option<String>,
    },
    /// Reducibility of tempered or segment induction, or the Jordan line of a point.
    Reducibility {
        /// Jordan set of the tempered representation, e.g. "Sp0: triv:1".
        #[arg(long)]
        jord: Option<String>,
        /// Cuspidal line.
        #[arg(long)]
        rho: Option<String>,
        /// Named reducibility dataset from the registry.
        #[arg(long)]
        dataset: Option<String>,
        /// Reducibility point x >= 1 (with --rho): print the Jordan line it determines.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 50)]
        max_m: u32,
    },
    /// Expand a Speh representation as a determinant of segments.
    Speh {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
        /// Cuspidal line; defaults to the trivial character of GL(1).
        #[arg(long)]
        rho: Option<String>,
    },
    /// Packets with both a cuspidal member and a member on the minimal parabolic.
    Antipodes {
        #[arg(long, value_parser = parse_kind)]
        family: GroupKind,
        #[arg(
            long,
            conflicts_with = "max_rank",
            required_unless_present = "max_rank"
        )]
        rank: Option<u32>,
        /// Check every rank 1..=N.
        #[arg(long)]
        max_rank: Option<u32>,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
        /// Dimension of the space of quadratic characters (overrides the registry).
        #[arg(long)]
        quad_dim: Option<u8>,
    },
    /// Recompute every fixture in the registry.
    Verify {
        /// Fixture kinds to run (comma separated), e.g. packet,antipodes.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Arithmetic,
    Packets,
    Both,
}

fn parse_kind(s: &str) -> std::result::Result<GroupKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            ok: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut v = out.json;
                if let Value::Object(map) = &mut v {
                    map.insert("schema".into(), json!(SCHEMA));
                }
                emit(&format!(
                    "{}\n",
                    serde_json::to_string_pretty(&v).expect("serializable")
                ));
            } else {
                emit(&out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "schema": SCHEMA, "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn load(cli: &Cli) -> Result<(Registry, String)> {
    match &cli.registry {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Registry(format!("{}: {e}", path.display())))?;
            Ok((Registry::from_toml_str(&text)?, text))
        }
        None => Ok((Registry::builtin(), BUILTIN_TOML.to_string())),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let (reg, text) = load(cli)?;
    match &cli.command {
        Command::Count {
            family,
            rank,
            isolated,
        } => count(*family, *rank, *isolated),
        Command::Enumerate {
            family,
            rank,
            isolated,
            jordan,
        } => enumerate(&reg, *family, *rank, *isolated, *jordan),
        Command::Packet {
            jord,
            basis,
            character,
        } => packet(&reg, jord, basis, character.as_deref()),
        Command::Character { jord, basis, signs } => character(&reg, jord, basis, signs.as_deref()),
        Command::Reducibility {
            jord,
            rho,
            dataset,
            point,
            max_m,
        } => reducibility(
            &reg,
            jord.as_deref(),
            rho.as_deref(),
            dataset.as_deref(),
            point.as_deref(),
            *max_m,
        ),
        Command::Speh { l, m, rho } => speh(&reg, *l, *m, rho.as_deref()),
        Command::Antipodes {
            family,
            rank,
            max_rank,
            route,
            quad_dim,
        } => {
            let space = match quad_dim {
                Some(d) => QuadCharSpace::new(*d)?,
                None => reg.quad_space(),
            };
            let ranks: Vec<u32> = match (rank, max_rank) {
                (Some(n), _) => vec![*n],
                (None, Some(n)) => (1..=*n).collect(),
                (None, None) => unreachable!("clap requires one of them"),
            };
            antipodes(*family, &ranks, *route, space)
        }
        Command::Verify { only } => verify_cmd(&reg, &text, only),
    }
}

fn count(kind: GroupKind, rank: u32, isolated: bool) -> Result<Output> {
    let cons = if isolated {
        IsolationConstraint::ISOLATED
    } else {
        IsolationConstraint::NONE
    };
    let fam = GroupFamily::new(kind, rank);
    let n = count_with(fam, cons);
    Ok(Output::ok(
        format!("{n}\n"),
        json!({ "family": kind, "rank": rank, "isolated": isolated, "count": n.to_string() }),
    ))
}

fn enumerate(
    reg: &Registry,
    kind: GroupKind,
    rank: u32,
    isolated: bool,
    jordan: bool,
) -> Result<Output> {
    let params: Vec<_> = enumerate_sn_params(GroupFamily::new(kind, rank))?
        .into_iter()
        .filter(|p| !isolated || is_isolated(p))
        .collect();
    let triv = reg.trivial()?;
    let psi = reg.quadratic(QuadChar(1))?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for p in &params {
        let jord = if jordan {
            let (fam, set) = param_to_jordan(kind, p, &triv, &psi)?;
            Some(format_family_and_set(fam, &set))
        } else {
            None
        };
        match &jord {
            Some(j) => text.push_str(&format!("{p}  {j}\n")),
            None => text.push_str(&format!("{p}\n")),
        }
        rows.push(json!({ "p1": p.p1, "p2": p.p2, "isolated": is_isolated(p), "jord": jord }));
    }
    text.push_str(&format!("{} parameters\n", params.len()));
    Ok(Output::ok(
        text,
        json!({ "family": kind, "rank": rank, "isolated_only": isolated, "parameters": rows }),
    ))
}

fn group_for(reg: &Registry, jord: &str, basis: &[String]) -> Result<ComponentGroup> {
    let (fam, set) = reg.parse_jordan(jord)?;
    if basis.is_empty() {
        return ComponentGroup::new(fam, set);
    }
    let g = ComponentGroup::new(fam, set.clone())?;
    let masks = basis
        .iter()
        .map(|b| g.parse_element(b))
        .collect::<Result<Vec<_>>>()?;
    ComponentGroup::with_basis(fam, set, masks)
}

fn selection_text(s: &Selection) -> String {
    let rule = format!("{:?}", s.rule)
        .trim_start_matches("Rule")
        .to_lowercase();
    let mut out = format!(
        "rule ({rule}): {} into {}",
        if s.embeds { "embeds" } else { "does not embed" },
        s.segment
    );
    if let Some(t) = s.tau {
        out.push_str(&format!(" ⊗ τ_{t}"));
    }
    if s.representative_dependent {
        out.push_str(" [read on the representative]");
    }
    out
}

fn element_lines(e: &PacketElement) -> Vec<String> {
    let mut lines = Vec::new();
    for step in e.steps() {
        if let PacketElement::Step {
            kind,
            segment,
            selections,
            ..
        } = step
        {
            lines.push(format!("{kind:?} {segment}"));
            for s in selections {
                lines.push(format!("  {}", selection_text(s)));
            }
        }
    }
    if let PacketElement::Base {
        family,
        jord,
        character,
        ..
    } = e.base()
    {
        let signs = character.signs();
        if signs.is_empty() {
            lines.push(format!("base {family} {jord}"));
        } else {
            lines.push(format!("base {family} {jord} {signs}"));
        }
    }
    lines
}

fn entry_text(entry: &PacketEntry) -> String {
    let r = ElementReport::from(entry);
    let mut flags = Vec::new();
    if r.cuspidal {
        flags.push("cuspidal");
    }
    if r.minimal_parabolic {
        flags.push("minimal parabolic");
    }
    let mut out = format!("{} {}", entry.character.signs(), entry.character);
    if !flags.is_empty() {
        out.push_str(&format!("  [{}]", flags.join(", ")));
    }
    out.push('\n');
    for l in element_lines(&entry.element) {
        out.push_str(&format!("    {l}\n"));
    }
    out
}

fn group_text(g: &ComponentGroup) -> String {
    let basis = g.describe_basis();
    format!(
        "{}\ncomponent group of order {}, basis: {}\n",
        format_family_and_set(g.family(), g.jord()),
        g.order(),
        if basis.is_empty() {
            "none".to_string()
        } else {
            basis.join(", ")
        }
    )
}

fn packet(reg: &Registry, jord: &str, basis: &[String], character: Option<&str>) -> Result<Output> {
    let g = group_for(reg, jord, basis)?;
    let mut p = build_packet(&g)?;
    if let Some(signs) = character {
        let chi = g.character(&Sign::parse_string(signs)?)?;
        p.elements.retain(|e| e.character == chi);
    }
    let mut text = group_text(&g);
    text.push_str(&format!(
        "{} elements, {} cuspidal, {} on the minimal parabolic\n\n",
        p.elements.len(),
        p.cuspidal_count(),
        p.minimal_parabolic_count()
    ));
    for e in &p.elements {
        text.push_str(&entry_text(e));
    }
    let reports: Vec<ElementReport> = p.elements.iter().map(ElementReport::from).collect();
    Ok(Output::ok(
        text,
        json!({
            "jord": format_family_and_set(g.family(), g.jord()),
            "group": GroupSummary::from(&g),
            "elements": reports,
            "cuspidal": p.cuspidal_count(),
            "minimal_parabolic": p.minimal_parabolic_count(),
        }),
    ))
}

fn character(reg: &Registry, jord: &str, basis: &[String], signs: Option<&str>) -> Result<Output> {
    let g = group_for(reg, jord, basis)?;
    let mut text = group_text(&g);
    match signs {
        None => {
            let mut rows = Vec::new();
            for chi in g.characters() {
                let cusp = g.is_cuspidal(&chi);
                text.push_str(&format!(
                    "{} {}{}\n",
                    chi.signs(),
                    chi,
                    if cusp { "  cuspidal" } else { "" }
                ));
                rows.push(
                    json!({ "signs": chi.signs(), "name": chi.to_string(), "cuspidal": cusp }),
                );
            }
            text.push_str(&format!("{} cuspidal\n", g.count_cuspidal()));
            Ok(Output::ok(
                text,
                json!({
                    "jord": format_family_and_set(g.family(), g.jord()),
                    "group": GroupSummary::from(&g),
                    "characters": rows,
                    "cuspidal": g.count_cuspidal(),
                }),
            ))
        }
        Some(s) => {
            let chi = g.character(&Sign::parse_string(s)?)?;
            let on_blocks: Vec<(String, String)> = g
                .jord()
                .iter()
                .enumerate()
                .map(|(i, b)| (b.to_string(), chi.sign_on_block(i).symbol().to_string()))
                .collect();
            let e = build_element(&g, &chi)?;
            let entry = PacketEntry {
                character: chi.clone(),
                element: e,
            };
            text.push_str(&format!(
                "representative: {}\n",
                on_blocks
                    .iter()
                    .map(|(b, v)| format!("{b}{v}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            text.push_str(&entry_text(&entry));
            let blocks: serde_json::Map<String, Value> = on_blocks
                .into_iter()
                .map(|(b, v)| (b, Value::String(v)))
                .collect();
            Ok(Output::ok(
                text,
                json!({
                    "jord": format_family_and_set(g.family(), g.jord()),
                    "group": GroupSummary::from(&g),
                    "representative": blocks,
                    "cuspidal": g.is_cuspidal(&chi),
                    "element": ElementReport::from(&entry),
                }),
            ))
        }
    }
}

fn reducibility(
    reg: &Registry,
    jord: Option<&str>,
    rho: Option<&str>,
    dataset: Option<&str>,
    point: Option<&str>,
    max_m: u32,
) -> Result<Output> {
    match (jord, rho, dataset, point) {
        (Some(j), Some(r), None, None) => {
            let (fam, set) = reg.parse_jordan(j)?;
            let rho = reg.lookup(r)?;
            let rows = reducibility_table(&set, &rho, max_m);
            let mut text = format!(
                "Ind(δ({},m) ⊗ π), Jord(π) = {}\n",
                rho.id,
                format_family_and_set(fam, &set)
            );
            for row in &rows {
                text.push_str(&format!(
                    "m={:<3} {}{}\n",
                    row.m,
                    if row.reducible {
                        "reducible"
                    } else {
                        "irreducible"
                    },
                    if row.in_jord { "  (in Jord)" } else { "" }
                ));
            }
            Ok(Output::ok(
                text,
                json!({ "jord": format_family_and_set(fam, &set), "rho": rho.id, "rows": rows }),
            ))
        }
        (None, None, Some(name), None) => {
            let data = reg.reducibility(name)?;
            let mut text = format!(
                "Ind(δ(Δ) ⊗ {}), centered Δ on {}\n",
                data.pi_tag, data.rho.id
            );
            let mut rows = Vec::new();
            for m in 1..=max_m {
                let seg = Segment::centered(data.rho.clone(), m);
                let red = segment_induction_reducible(&seg, data)?;
                text.push_str(&format!(
                    "m={m:<3} {seg} {}\n",
                    if red { "reducible" } else { "irreducible" }
                ));
                rows.push(json!({ "m": m, "segment": seg.to_string(), "reducible": red }));
            }
            Ok(Output::ok(
                text,
                json!({ "dataset": name, "data": data, "rows": rows }),
            ))
        }
        (None, Some(r), None, Some(p)) => {
            let rho = reg.lookup(r)?;
            let x: HalfInt = p.parse()?;
            let line: Vec<u32> = jord_line_from_reducibility(&rho, x)?
                .iter()
                .map(|b| b.m)
                .collect();
            let text = format!(
                "{}\n",
                line.iter()
                    .map(|m| format!("{}:{m}", rho.id))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            Ok(Output::ok(
                text,
                json!({ "rho": rho.id, "point": x, "blocks": line }),
            ))
        }
        _ => Err(Error::Parse(
            "use --jord with --rho, --dataset alone, or --rho with --point".into(),
        )),
    }
}

fn speh(reg: &Registry, l: u32, m: u32, rho: Option<&str>) -> Result<Output> {
    let rho = match rho {
        Some(id) => reg.lookup(id)?,
        None => reg.trivial()?,
    };
    let x = speh_determinant(&rho, l, m)?;
    let st = expansion_stats(&x);
    let text = format!(
        "u(δ({},{l}), {m}) = {}\n{} terms ({} positive, {} negative), {} permutations survived\n",
        rho.id, x.element, st.terms, st.positive, st.negative, x.surviving_permutations
    );
    Ok(Output::ok(
        text,
        json!({
            "rho": rho.id,
            "l": l,
            "m": m,
            "expansion": x.element.to_string(),
            "terms": x.element,
            "stats": st,
            "surviving_permutations": x.surviving_permutations,
        }),
    ))
}

fn verdict_text(v: &AntipodesVerdict) -> String {
    match &v.witness {
        Some(w) => format!("yes, e.g. {w}"),
        None => "no".to_string(),
    }
}

fn antipodes(kind: GroupKind, ranks: &[u32], route: Route, space: QuadCharSpace) -> Result<Output> {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for &n in ranks {
        let arith = (route != Route::Packets).then(|| exists_antipodal_packet(kind, n, space));
        let packets = match route {
            Route::Arithmetic => None,
            _ => Some(packet_level_antipodes(kind, n, space)?),
        };
        let agree = match (&arith, &packets) {
            (Some(a), Some(p)) => Some(a.exists == p.exists),
            _ => None,
        };
        if agree == Some(false) {
            ok = false;
        }
        let fam = GroupFamily::new(kind, n);
        let mut line = format!("{fam}:");
        if let Some(a) = &arith {
            line.push_str(&format!(" arithmetic {}", verdict_text(a)));
        }
        if let Some(p) = &packets {
            line.push_str(&format!(
                "{} packets {}",
                if arith.is_some() { ";" } else { "" },
                verdict_text(p)
            ));
        }
        if agree == Some(false) {
            line.push_str("  ROUTES DISAGREE");
        }
        if !arith
            .as_ref()
            .or(packets.as_ref())
            .is_some_and(|v| v.within_hypothesis)
        {
            line.push_str("  (outside odd residual characteristic)");
        }
        text.push_str(&line);
        text.push('\n');
        rows.push(json!({ "rank": n, "arithmetic": arith, "packets": packets, "agree": agree }));
    }
    Ok(Output {
        text,
        json: json!({ "family": kind, "quad_dim": space.dim(), "ranks": rows }),
        ok,
    })
}

fn verify_cmd(reg: &Registry, text: &str, only: &[String]) -> Result<Output> {
    let fixtures = parse_fixtures(text)?;
    let outcomes = verify(reg, &fixtures, only);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut out = String::new();
    for o in &outcomes {
        out.push_str(&format!(
            "{} {} [{}] {}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.anchor,
            o.kind,
            o.subject
        ));
        for m in &o.mismatches {
            out.push_str(&format!("     {m}\n"));
        }
    }
    out.push_str(&format!(
        "{} passed, {} failed\n",
        outcomes.len() - failed,
        failed
    ));
    Ok(Output {
        text: out,
        json: json!({ "passed": outcomes.len() - failed, "failed": failed, "outcomes": outcomes }),
        ok: failed == 0,
    })
}
