//! The published small transitive 3-(v,{4,6},1) designs.
//!
//! Each entry is a text asset under `data/` that mirrors the printed listing:
//! point labels as printed, generators in cycle notation (or a named group)
//! and one base block per line. Directives:
//!
//! ```text
//! id D22_3            entry name
//! v 22                number of points
//! labels z11x2        decimal (default) | hex | z11x2
//! gen (..)(..)        a generator, repeatable
//! group d11           a named group instead of `gen` lines
//! order 110           expected order of the full automorphism group
//! hexads sbp(22,6)    expected classification of the hexads
//! base 0_0 1_0 ...    a base block
//! flat 12348c         a block written as a string of hex digits
//! ```

mod labels;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::canon::automorphism_group;
use crate::classify::{classify, Classification, TwoClassParams};
use crate::design::{develop, tetrad_count, verify_twbd, SetSystem, TwbdReport};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

pub use labels::Labels;

macro_rules! assets {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../../data/", $id, ".txt")))),*]
    };
}

const ENTRIES: &[(&str, &str)] = assets![
    "D16_1", "D20_1", "X20_2", "X20_3", "D22_1", "D22_2", "D22_3", "X22_4", "X22_5", "X22_6", "X22_7", "D26_1",
    "D26_2", "D26_3", "D26_4", "D26_5", "D26_6", "D26_7", "D28_1", "D28_2", "D28_3", "D28_4", "D28_5", "D28_6",
    "D28_7", "D28_8", "D28_9", "D28_10", "D28_11", "D28_12", "D28_13", "D28_14", "D28_15",
];

const GROUPS: &[(&str, &str)] = &[
    ("c26", include_str!("../../data/groups/c26.txt")),
    ("c2xc14", include_str!("../../data/groups/c2xc14.txt")),
    ("f8", include_str!("../../data/groups/f8.txt")),
    ("f8_gamma", include_str!("../../data/groups/f8_gamma.txt")),
    ("d16_full", include_str!("../../data/groups/d16_full.txt")),
];

const D16_FLAT: &str = include_str!("../../data/D16_flat.txt");

/// Expected shape of the hexads of an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HexadTag {
    Biplane { v: usize, k: usize, lambda: usize },
    SemiBiplane { v: usize, k: usize },
    TwoClass(TwoClassParams),
    NotTwoClass,
}

impl HexadTag {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, msg: format!("bad hexad tag {text:?}") };
        let nums = |s: &str, sep: &[char]| -> Result<Vec<usize>> {
            s.split(sep).map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        let t = text.trim();
        if t == "not-2-class" {
            return Ok(HexadTag::NotTwoClass);
        }
        if let Some(rest) = t.strip_prefix("2-(").and_then(|r| r.strip_suffix(") biplane")) {
            let n = nums(rest, &[','])?;
            let [v, k, lambda] = n[..] else { return Err(bad()) };
            return Ok(HexadTag::Biplane { v, k, lambda });
        }
        if let Some(rest) = t.strip_prefix("sbp(").and_then(|r| r.strip_suffix(')')) {
            let n = nums(rest, &[','])?;
            let [v, k] = n[..] else { return Err(bad()) };
            return Ok(HexadTag::SemiBiplane { v, k });
        }
        if let Some(rest) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let n = nums(rest, &[',', ';'])?;
            let [v, k, lambda1, lambda2, delta1, delta2] = n[..] else { return Err(bad()) };
            return Ok(HexadTag::TwoClass(TwoClassParams { v, k, lambda1, lambda2, delta1, delta2 }));
        }
        Err(bad())
    }

    pub fn matches(&self, c: &Classification) -> bool {
        match *self {
            HexadTag::Biplane { v, k, lambda } => {
                c.is_biplane && c.symmetric_lambda == Some(lambda) && c.two_class.is_some_and(|p| p.v == v && p.k == k)
            }
            HexadTag::SemiBiplane { v, k } => c.is_semibiplane && c.two_class.is_some_and(|p| p.v == v && p.k == k),
            HexadTag::TwoClass(p) => c.two_class == Some(p),
            HexadTag::NotTwoClass => c.two_class.is_none(),
        }
    }
}

impl fmt::Display for HexadTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HexadTag::Biplane { v, k, lambda } => write!(f, "2-({v},{k},{lambda}) biplane"),
            HexadTag::SemiBiplane { v, k } => write!(f, "sbp({v},{k})"),
            HexadTag::TwoClass(p) => write!(f, "{p}"),
            HexadTag::NotTwoClass => f.write_str("not-2-class"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub v: usize,
    pub labels: Labels,
    /// Generators as printed, in the entry's labels; empty for named groups.
    pub generator_text: Vec<String>,
    /// Name of a built-in group, if the entry uses one.
    pub group_name: Option<String>,
    pub group: PermGroup,
    pub baseblocks: Vec<Vec<u32>>,
    pub expected_order: Option<u64>,
    pub hexads: HexadTag,
}

impl CatalogEntry {
    /// Develops the base blocks under the base group.
    pub fn materialize(&self) -> Result<SetSystem> {
        develop(&self.baseblocks, &self.group)
    }
}

/// Parsed contents of an asset: the header fields and the blocks.
#[derive(Default)]
struct Asset {
    id: Option<String>,
    v: Option<usize>,
    labels: Labels,
    gens: Vec<String>,
    group: Option<String>,
    order: Option<u64>,
    hexads: Option<String>,
    blocks: Vec<Vec<u32>>,
}

fn parse_asset(text: &str) -> Result<Asset> {
    let mut a = Asset::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let (key, rest) = line.split_once(char::is_whitespace).map_or((line, ""), |(k, r)| (k, r.trim()));
        match key {
            "id" => a.id = Some(rest.to_string()),
            "v" => a.v = Some(rest.parse().map_err(|_| err(format!("bad v {rest:?}")))?),
            "labels" => a.labels = Labels::parse(rest).ok_or_else(|| err(format!("unknown labels {rest:?}")))?,
            "gen" => a.gens.push(rest.to_string()),
            "group" => a.group = Some(rest.to_string()),
            "order" => a.order = Some(rest.parse().map_err(|_| err(format!("bad order {rest:?}")))?),
            "hexads" => a.hexads = Some(rest.to_string()),
            "base" => {
                let b = rest
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| a.labels.parse_point(t).ok_or_else(|| err(format!("bad point {t:?}"))))
                    .collect::<Result<Vec<u32>>>()?;
                a.blocks.push(b);
            }
            "flat" => {
                let b = rest
                    .chars()
                    .map(|c| c.to_digit(16).ok_or_else(|| err(format!("bad digit {c:?}"))))
                    .collect::<Result<Vec<u32>>>()?;
                a.blocks.push(b);
            }
            _ => return Err(err(format!("unknown directive {key:?}"))),
        }
    }
    Ok(a)
}

fn group_from_gens(v: usize, labels: Labels, gens: &[String]) -> Result<PermGroup> {
    let perms = gens
        .iter()
        .map(|g| crate::perm::parse_cycle_notation_with(g, v, |t| labels.parse_point(t)))
        .collect::<Result<Vec<Permutation>>>()?;
    if perms.is_empty() {
        return Ok(PermGroup::trivial(v));
    }
    PermGroup::new(perms)
}

/// The group on `Z11 x Z2` generated by `x_i -> (x+1)_i` and `x_i <-> (-x)_{i+1}`,
/// with `x_i` stored as `x + 11 i`.
pub fn d11_group() -> PermGroup {
    let shift: Vec<u32> = (0..22u32).map(|p| (p % 11 + 1) % 11 + 11 * (p / 11)).collect();
    let flip: Vec<u32> = (0..22u32).map(|p| (11 - p % 11) % 11 + 11 * (1 - p / 11)).collect();
    PermGroup::new(alloc::vec![Permutation::from_images(shift).unwrap(), Permutation::from_images(flip).unwrap()])
        .unwrap()
}

/// [`d11_group`] extended by `x_i -> (3x+1)_i`.
pub fn f11_group() -> PermGroup {
    let affine: Vec<u32> = (0..22u32).map(|p| (3 * (p % 11) + 1) % 11 + 11 * (p / 11)).collect();
    let extra = PermGroup::new(alloc::vec![Permutation::from_images(affine).unwrap()]).unwrap();
    d11_group().join(&extra).unwrap()
}

/// A built-in group by name: `c26`, `c2xc14`, `f8`, `f8_gamma`, `d16_full`,
/// `d11`, `f11`, or the base group of a catalog entry given by its id.
pub fn named_group(name: &str) -> Result<PermGroup> {
    match name {
        "d11" => return Ok(d11_group()),
        "f11" => return Ok(f11_group()),
        _ => {}
    }
    if let Some((_, text)) = GROUPS.iter().find(|(n, _)| *n == name) {
        let a = parse_asset(text)?;
        let v = a.v.ok_or_else(|| Error::Parse { line: 0, msg: "group asset without v".into() })?;
        return group_from_gens(v, a.labels, &a.gens);
    }
    if ENTRIES.iter().any(|(id, _)| *id == name) {
        return Ok(get(name)?.group);
    }
    Err(Error::UnknownId(name.to_string()))
}

/// Names accepted by [`named_group`] besides entry ids.
pub fn group_names() -> Vec<&'static str> {
    let mut v: Vec<&'static str> = GROUPS.iter().map(|(n, _)| *n).collect();
    v.extend(["d11", "f11"]);
    v
}

/// Entry ids in listing order.
pub fn list() -> Vec<&'static str> {
    ENTRIES.iter().map(|(id, _)| *id).collect()
}

pub fn get(id: &str) -> Result<CatalogEntry> {
    let (_, text) = ENTRIES.iter().find(|(i, _)| *i == id).ok_or_else(|| Error::UnknownId(id.to_string()))?;
    let a = parse_asset(text)?;
    let missing = |what: &str| Error::Parse { line: 0, msg: format!("{id}: missing `{what}`") };
    let v = a.v.ok_or_else(|| missing("v"))?;
    let group = match &a.group {
        Some(name) => named_group(name)?,
        None => group_from_gens(v, a.labels, &a.gens)?,
    };
    if group.degree() != v {
        return Err(Error::DegreeMismatch { expected: v, found: group.degree() });
    }
    Ok(CatalogEntry {
        id: a.id.ok_or_else(|| missing("id"))?,
        v,
        labels: a.labels,
        generator_text: a.gens,
        group_name: a.group,
        group,
        baseblocks: a.blocks,
        expected_order: a.order,
        hexads: HexadTag::parse(&a.hexads.ok_or_else(|| missing("hexads"))?)?,
    })
}

pub fn materialize(id: &str) -> Result<SetSystem> {
    get(id)?.materialize()
}

/// The best biplane on 16 points and its 60 ovals, from the flat listing.
pub fn best_biplane_with_ovals() -> SetSystem {
    let a = parse_asset(D16_FLAT).expect("embedded fixture parses");
    SetSystem::new(a.v.unwrap(), a.blocks).expect("embedded fixture is a set system")
}

/// Outcome of checking one entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryReport {
    pub id: String,
    pub v: usize,
    pub balance: TwbdReport,
    pub hexad_count: usize,
    pub tetrad_count: usize,
    pub expected_tetrads: Option<usize>,
    pub hexads: HexadTag,
    pub hexad_label: String,
    pub hexads_ok: bool,
    pub base_group_order: Option<u64>,
    pub full_order: Option<u64>,
    pub expected_order: Option<u64>,
    pub error: Option<String>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.balance.holds
            && self.hexad_count == self.v
            && Some(self.tetrad_count) == self.expected_tetrads
            && self.hexads_ok
            && self.expected_order.is_none_or(|o| self.full_order == Some(o))
    }
}

/// Checks one entry: balance, block counts, hexad class and group orders.
pub fn verify_entry(entry: &CatalogEntry) -> EntryReport {
    let mut r = EntryReport {
        id: entry.id.clone(),
        v: entry.v,
        balance: TwbdReport { holds: false, bad_block: None, witness: None },
        hexad_count: 0,
        tetrad_count: 0,
        expected_tetrads: tetrad_count(entry.v).ok(),
        hexads: entry.hexads,
        hexad_label: String::new(),
        hexads_ok: false,
        base_group_order: entry.group.order().ok(),
        full_order: None,
        expected_order: entry.expected_order,
        error: None,
    };
    let design = match entry.materialize() {
        Ok(d) => d,
        Err(e) => {
            r.error = Some(e.to_string());
            return r;
        }
    };
    r.balance = verify_twbd(&design, 3, &[4, 6], 1);
    let hexads = design.hexads();
    r.hexad_count = hexads.len();
    r.tetrad_count = design.tetrads().len();
    let c = classify(&hexads);
    r.hexad_label = c.label();
    r.hexads_ok = entry.hexads.matches(&c);
    match automorphism_group(&design) {
        Ok((_, order)) => r.full_order = Some(order),
        Err(e) => r.error = Some(e.to_string()),
    }
    r
}

/// Verifies every entry; failures are reported, not returned as errors.
pub fn verify_all() -> Vec<EntryReport> {
    list()
        .into_iter()
        .map(|id| match get(id) {
            Ok(e) => verify_entry(&e),
            Err(err) => EntryReport {
                id: id.to_string(),
                v: 0,
                balance: TwbdReport { holds: false, bad_block: None, witness: None },
                hexad_count: 0,
                tetrad_count: 0,
                expected_tetrads: None,
                hexads: HexadTag::NotTwoClass,
                hexad_label: String::new(),
                hexads_ok: false,
                base_group_order: None,
                full_order: None,
                expected_order: None,
                error: Some(err.to_string()),
            },
        })
        .collect()
}
