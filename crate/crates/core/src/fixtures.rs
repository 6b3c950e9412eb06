//! Named example fixtures stored next to the registry as `[[fixture]]`
//! tables, and the checker that recomputes each one.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::antipodes::{
    exists_antipodal_packet, gauss_decomposition_sp, iwahori_antipodes_so, iwahori_antipodes_sp,
    packet_level_antipodes,
};
use crate::compgroup::{ComponentGroup, Sign};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::jordan::{validate_jordan_set, Violation};
use crate::label::{GroupFamily, GroupKind, Parity};
use crate::packets::{
    build_packet, gl_factor_inventory, is_cuspidal_element, supported_on_minimal_parabolic,
    PacketElement, StepKind,
};
use crate::reducibility::{
    jord_line_from_reducibility, reducibility_from_jord_line, reducibility_table,
    segment_induction_reducible,
};
use crate::registry::Registry;
use crate::segment::Segment;
use crate::speh::speh_determinant;
use crate::unramified::{count_with, enumerate_sn_params, is_isolated, IsolationConstraint};

#[derive(Debug, Deserialize)]
struct FixtureFile {
    #[serde(default)]
    fixture: Vec<Fixture>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Fixture {
    pub anchor: String,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    Count {
        family: GroupKind,
        rank: u32,
        isolated: bool,
        value: String,
    },
    CountDifference {
        family: GroupKind,
        rank: u32,
        value: String,
    },
    Enumerate {
        family: GroupKind,
        rank: u32,
        params: Vec<String>,
    },
    Oracle {
        max_rank: u32,
    },
    Validate {
        jord: String,
        violations: Vec<String>,
    },
    Reducibility {
        jord: String,
        rho: String,
        max_m: u32,
        reducible_parity: Parity,
        exceptions: Vec<u32>,
    },
    Segment {
        dataset: String,
        max_m: u32,
        reducible_parity: Parity,
        exceptions: Vec<u32>,
    },
    Roundtrip {
        points: Vec<String>,
    },
    JordLine {
        rho: String,
        point: String,
        blocks: Vec<u32>,
    },
    Packet(PacketCheck),
    Speh {
        l: u32,
        m: u32,
        expansion: String,
    },
    Antipodes {
        family: GroupKind,
        max_rank: u32,
    },
    Iwahori {
        family: GroupKind,
        ranks: Vec<u32>,
        expect: Vec<bool>,
    },
    Gauss {
        values: Vec<u64>,
        expect: Vec<[u64; 4]>,
    },
    /// An exhaustive sweep from [`crate::properties`].
    Property {
        name: String,
        size: u64,
        #[serde(default)]
        min_cases: u64,
    },
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::Count { .. } => "count",
            Check::CountDifference { .. } => "count_difference",
            Check::Enumerate { .. } => "enumerate",
            Check::Oracle { .. } => "oracle",
            Check::Validate { .. } => "validate",
            Check::Reducibility { .. } => "reducibility",
            Check::Segment { .. } => "segment",
            Check::Roundtrip { .. } => "roundtrip",
            Check::JordLine { .. } => "jord_line",
            Check::Packet(_) => "packet",
            Check::Speh { .. } => "speh",
            Check::Antipodes { .. } => "antipodes",
            Check::Iwahori { .. } => "iwahori",
            Check::Gauss { .. } => "gauss",
            Check::Property { .. } => "property",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct PacketCheck {
    pub jord: String,
    #[serde(default)]
    pub basis: Option<Vec<String>>,
    pub characters: Option<usize>,
    pub cuspidal: Option<usize>,
    pub minimal_parabolic: Option<usize>,
    pub cuspidal_characters: Option<Vec<String>>,
    pub trivial_minimal_parabolic: Option<bool>,
    #[serde(default)]
    pub element: Vec<ElementCheck>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ElementCheck {
    pub character: String,
    pub steps: Option<Vec<StepKind>>,
    pub gl_factors: Option<Vec<String>>,
    /// `RuleX:embeds` for each pair removal, root first.
    pub selections: Option<Vec<String>>,
    pub base: Option<String>,
    pub base_character: Option<String>,
    pub minimal_parabolic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub anchor: String,
    pub kind: String,
    pub subject: String,
    pub passed: bool,
    /// One line per mismatch, or the error that stopped the check.
    pub mismatches: Vec<String>,
}

pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>> {
    let file: FixtureFile = toml::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
    Ok(file.fixture)
}

/// Runs the fixtures whose kind is in `only` (all when empty).
pub fn verify(reg: &Registry, fixtures: &[Fixture], only: &[String]) -> Vec<Outcome> {
    fixtures
        .iter()
        .filter(|f| only.is_empty() || only.iter().any(|k| k == f.check.kind()))
        .map(|f| run(reg, f))
        .collect()
}

pub fn run(reg: &Registry, f: &Fixture) -> Outcome {
    let mut diffs = Diffs::default();
    let subject = subject(&f.check);
    if let Err(e) = check(reg, &f.check, &mut diffs) {
        diffs.0.push(format!("error: {e}"));
    }
    Outcome {
        anchor: f.anchor.clone(),
        kind: f.check.kind().to_string(),
        subject,
        passed: diffs.0.is_empty(),
        mismatches: diffs.0,
    }
}

fn subject(c: &Check) -> String {
    match c {
        Check::Count {
            family,
            rank,
            isolated,
            ..
        } => {
            format!("{family}{rank}{}", if *isolated { " isolated" } else { "" })
        }
        Check::CountDifference { family, rank, .. } => format!("{family}{rank} non-isolated"),
        Check::Enumerate { family, rank, .. } => format!("{family}{rank}"),
        Check::Oracle { max_rank } => format!("n <= {max_rank}"),
        Check::Validate { jord, .. } | Check::Reducibility { jord, .. } => jord.clone(),
        Check::Segment { dataset, .. } => dataset.clone(),
        Check::Roundtrip { points } => format!("{} points", points.len()),
        Check::JordLine { rho, point, .. } => format!("{rho} at {point}"),
        Check::Packet(p) => p.jord.clone(),
        Check::Speh { l, m, .. } => format!("l={l} m={m}"),
        Check::Antipodes { family, max_rank } => format!("{family} n <= {max_rank}"),
        Check::Iwahori { family, ranks, .. } => format!("{family} {ranks:?}"),
        Check::Gauss { values, .. } => format!("{values:?}"),
        Check::Property { name, size, .. } => format!("{name} size {size}"),
    }
}

#[derive(Default)]
struct Diffs(Vec<String>);

impl Diffs {
    fn eq<T: PartialEq + std::fmt::Debug>(
        &mut self,
        what: impl std::fmt::Display,
        expected: T,
        actual: T,
    ) {
        if expected != actual {
            self.0
                .push(format!("{what}: expected {expected:?}, got {actual:?}"));
        }
    }
}

fn parse_count(s: &str) -> Result<BigUint> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn check(reg: &Registry, c: &Check, d: &mut Diffs) -> Result<()> {
    match c {
        Check::Count {
            family,
            rank,
            isolated,
            value,
        } => {
            let cons = if *isolated {
                IsolationConstraint::ISOLATED
            } else {
                IsolationConstraint::NONE
            };
            let got = count_with(GroupFamily::new(*family, *rank), cons);
            d.eq("count", parse_count(value)?, got);
        }
        Check::CountDifference {
            family,
            rank,
            value,
        } => {
            let fam = GroupFamily::new(*family, *rank);
            let got = count_with(fam, IsolationConstraint::NONE)
                - count_with(fam, IsolationConstraint::ISOLATED);
            d.eq("difference", parse_count(value)?, got);
        }
        Check::Enumerate {
            family,
            rank,
            params,
        } => {
            let got: Vec<String> = enumerate_sn_params(GroupFamily::new(*family, *rank))?
                .iter()
                .map(|p| p.to_string())
                .collect();
            d.eq("parameters", params.clone(), got);
        }
        Check::Oracle { max_rank } => {
            for kind in [GroupKind::Sp, GroupKind::SoOdd] {
                for n in 0..=*max_rank {
                    let fam = GroupFamily::new(kind, n);
                    let params = enumerate_sn_params(fam)?;
                    let iso = params.iter().filter(|p| is_isolated(p)).count();
                    d.eq(
                        format!("{fam} strongly negative"),
                        BigUint::from(params.len()),
                        count_with(fam, IsolationConstraint::NONE),
                    );
                    d.eq(
                        format!("{fam} isolated"),
                        BigUint::from(iso),
                        count_with(fam, IsolationConstraint::ISOLATED),
                    );
                }
            }
        }
        Check::Validate { jord, violations } => {
            let (fam, set) = reg.parse_jordan(jord)?;
            let got: Vec<String> = validate_jordan_set(fam, &set)
                .iter()
                .map(|v| {
                    match v {
                        Violation::WrongType { .. } => "a",
                        Violation::Dimension { .. } => "b",
                        Violation::CentralCharacter { .. } => "c",
                    }
                    .to_string()
                })
                .collect();
            d.eq("violated clauses", violations.clone(), got);
        }
        Check::Reducibility {
            jord,
            rho,
            max_m,
            reducible_parity,
            exceptions,
        } => {
            let (_, set) = reg.parse_jordan(jord)?;
            let rho = reg.lookup(rho)?;
            for row in reducibility_table(&set, &rho, *max_m) {
                let expected =
                    Parity::of(row.m) == *reducible_parity && !exceptions.contains(&row.m);
                d.eq(format!("m={}", row.m), expected, row.reducible);
            }
        }
        Check::Segment {
            dataset,
            max_m,
            reducible_parity,
            exceptions,
        } => {
            let data = reg.reducibility(dataset)?;
            for m in 1..=*max_m {
                let seg = Segment::centered(data.rho.clone(), m);
                let expected = Parity::of(m) == *reducible_parity && !exceptions.contains(&m);
                d.eq(
                    format!("m={m}"),
                    expected,
                    segment_induction_reducible(&seg, data)?,
                );
            }
        }
        Check::Roundtrip { points } => {
            let triv = reg.trivial()?;
            for p in points {
                let x: HalfInt = p.parse()?;
                let line = jord_line_from_reducibility(&triv, x)?;
                let set = crate::jordan::JordanSet::new(line)?;
                d.eq(
                    format!("x={x}"),
                    Some(x),
                    reducibility_from_jord_line(&set, &triv.id),
                );
            }
        }
        Check::JordLine { rho, point, blocks } => {
            let rho = reg.lookup(rho)?;
            let got: Vec<u32> = jord_line_from_reducibility(&rho, point.parse()?)?
                .iter()
                .map(|b| b.m)
                .collect();
            d.eq("blocks", blocks.clone(), got);
        }
        Check::Packet(p) => check_packet(reg, p, d)?,
        Check::Speh { l, m, expansion } => {
            let x = speh_determinant(&reg.trivial()?, *l, *m)?;
            d.eq("expansion", expansion.clone(), x.element.to_string());
        }
        Check::Antipodes { family, max_rank } => {
            let space = reg.quad_space();
            for n in 1..=*max_rank {
                let arith = exists_antipodal_packet(*family, n, space).exists;
                let packets = packet_level_antipodes(*family, n, space)?.exists;
                d.eq(format!("n={n} arithmetic"), n % 2 == 0, arith);
                d.eq(format!("n={n} packet search"), n % 2 == 0, packets);
            }
        }
        Check::Iwahori {
            family,
            ranks,
            expect,
        } => {
            for (n, e) in ranks.iter().zip(expect) {
                let got = match family {
                    GroupKind::Sp => iwahori_antipodes_sp(*n),
                    GroupKind::SoOdd => iwahori_antipodes_so(*n),
                };
                d.eq(format!("n={n}"), *e, got);
            }
        }
        Check::Gauss { values, expect } => {
            for (l, e) in values.iter().zip(expect) {
                let (a, b, c, x) = gauss_decomposition_sp(*l);
                d.eq(format!("l={l}"), *e, [a, b, c, x]);
            }
        }
        Check::Property {
            name,
            size,
            min_cases,
        } => {
            let r = crate::properties::run(name, *size)?;
            if r.cases < *min_cases {
                d.0.push(format!("only {} cases, wanted {min_cases}", r.cases));
            }
            d.0.extend(r.violations);
        }
    }
    Ok(())
}

fn check_packet(reg: &Registry, p: &PacketCheck, d: &mut Diffs) -> Result<()> {
    let (fam, set) = reg.parse_jordan(&p.jord)?;
    let group = match &p.basis {
        None => ComponentGroup::new(fam, set)?,
        Some(basis) => {
            let g = ComponentGroup::new(fam, set.clone())?;
            let masks = basis
                .iter()
                .map(|b| g.parse_element(b))
                .collect::<Result<Vec<_>>>()?;
            ComponentGroup::with_basis(fam, set, masks)?
        }
    };
    let packet = build_packet(&group)?;
    if let Some(n) = p.characters {
        d.eq("characters", n, packet.elements.len());
    }
    if let Some(n) = p.cuspidal {
        d.eq("cuspidal", n, packet.cuspidal_count());
        d.eq("cuspidal (counted)", n as u64, group.count_cuspidal());
    }
    if let Some(n) = p.minimal_parabolic {
        d.eq("minimal parabolic", n, packet.minimal_parabolic_count());
    }
    if let Some(list) = &p.cuspidal_characters {
        let got: BTreeSet<String> = packet
            .elements
            .iter()
            .filter(|e| is_cuspidal_element(&e.element))
            .map(|e| e.character.signs())
            .collect();
        d.eq(
            "cuspidal characters",
            list.iter().cloned().collect::<BTreeSet<_>>(),
            got,
        );
    }
    if let Some(flag) = p.trivial_minimal_parabolic {
        let e = packet
            .elements
            .iter()
            .find(|e| e.character.is_trivial())
            .map(|e| &e.element)
            .ok_or_else(|| Error::InvalidCharacter("trivial character missing".into()))?;
        d.eq(
            "trivial character on minimal parabolic",
            flag,
            supported_on_minimal_parabolic(e),
        );
    }
    for ec in &p.element {
        let chi = group.character(&Sign::parse_string(&ec.character)?)?;
        let e = packet
            .get(&chi)
            .ok_or_else(|| Error::InvalidCharacter(ec.character.clone()))?;
        let tag = |what: &str| format!("{} {what}", ec.character);
        let steps = e.steps();
        if let Some(kinds) = &ec.steps {
            let got: Vec<StepKind> = steps
                .iter()
                .map(|s| match s {
                    PacketElement::Step { kind, .. } => *kind,
                    PacketElement::Base { .. } => unreachable!(),
                })
                .collect();
            d.eq(tag("steps"), kinds.clone(), got);
        }
        if let Some(f) = &ec.gl_factors {
            let got: Vec<String> = gl_factor_inventory(e)
                .iter()
                .map(|s| s.to_string())
                .collect();
            d.eq(tag("gl factors"), f.clone(), got);
        }
        if let Some(sel) = &ec.selections {
            let got: Vec<String> = steps
                .iter()
                .flat_map(|s| match s {
                    PacketElement::Step { selections, .. } => selections.clone(),
                    PacketElement::Base { .. } => Vec::new(),
                })
                .map(|s| format!("{:?}:{}", s.rule, s.embeds))
                .collect();
            d.eq(tag("selections"), sel.clone(), got);
        }
        if let Some(b) = &ec.base {
            d.eq(tag("base"), b.clone(), e.base_jord().to_string());
        }
        if let Some(bc) = &ec.base_character {
            let got = match e.base() {
                PacketElement::Base { character, .. } => character.signs(),
                PacketElement::Step { .. } => unreachable!(),
            };
            d.eq(tag("base character"), bc.clone(), got);
        }
        if let Some(mp) = ec.minimal_parabolic {
            d.eq(
                tag("minimal parabolic"),
                mp,
                supported_on_minimal_parabolic(e),
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::BUILTIN_TOML;

    #[test]
    fn builtin_fixtures_parse() {
        let f = parse_fixtures(BUILTIN_TOML).unwrap();
        assert!(f.len() > 30);
        assert!(f.iter().any(|x| x.anchor == "ex-symp(4)"));
    }

    #[test]
    fn builtin_packet_fixtures_pass() {
        let reg = Registry::builtin();
        let f = parse_fixtures(BUILTIN_TOML).unwrap();
        for o in verify(&reg, &f, &["packet".to_string()]) {
            assert!(o.passed, "{} {}: {:?}", o.anchor, o.subject, o.mismatches);
        }
    }
}
