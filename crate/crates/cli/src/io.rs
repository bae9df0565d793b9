//! Design and group files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hexad_core::design::develop;
use hexad_core::perm::{parse_cycle_notation, parse_group_file};
use hexad_core::{PermGroup, SetSystem};
use serde::{Deserialize, Serialize};

/// JSON design format. `blocks` may be omitted when `baseblocks` and
/// `group` are given; the blocks are then developed on load.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignFile {
    pub v: usize,
    #[serde(default)]
    pub blocks: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseblocks: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<String>>,
}

impl DesignFile {
    pub fn from_system(s: &SetSystem) -> Self {
        DesignFile { v: s.v(), blocks: s.blocks().to_vec(), baseblocks: None, group: None }
    }

    pub fn with_orbits(s: &SetSystem, baseblocks: Vec<Vec<u32>>, group: &PermGroup) -> Self {
        let mut base = baseblocks;
        for b in &mut base {
            b.sort_unstable();
        }
        DesignFile {
            v: s.v(),
            blocks: s.blocks().to_vec(),
            baseblocks: Some(base),
            group: Some(group.generators().iter().map(|g| g.to_cycle_string()).collect()),
        }
    }

    pub fn group(&self) -> Result<Option<PermGroup>> {
        let Some(gens) = &self.group else { return Ok(None) };
        let perms = gens.iter().map(|g| parse_cycle_notation(g, self.v)).collect::<Result<Vec<_>, _>>()?;
        if perms.is_empty() {
            return Ok(Some(PermGroup::trivial(self.v)));
        }
        Ok(Some(PermGroup::new(perms)?))
    }

    pub fn to_system(&self) -> Result<SetSystem> {
        if self.blocks.is_empty() {
            if let (Some(base), Some(group)) = (&self.baseblocks, self.group()?) {
                return Ok(develop(base, &group)?);
            }
        }
        Ok(SetSystem::new(self.v, self.blocks.clone())?)
    }
}

/// Errors that map to the "bad input" exit code.
#[derive(Debug)]
pub struct InputError(pub anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| InputError(e).into())
}

pub fn read_design(path: &Path) -> Result<SetSystem> {
    input((|| {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: DesignFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        file.to_system().with_context(|| format!("loading {}", path.display()))
    })())
}

pub fn read_group(path: &Path) -> Result<PermGroup> {
    input((|| {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse_group_file(&text).with_context(|| format!("parsing {}", path.display()))
    })())
}

/// Certificate cache: hex certificate -> class id.
pub fn read_cache(path: &Path) -> Result<BTreeMap<String, u64>> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let text = fs::read_to_string(path)?;
    let map: BTreeMap<String, u64> =
        serde_json::from_str(&text).with_context(|| format!("parsing cache {}", path.display()))?;
    Ok(map)
}

pub fn write_cache(path: &Path, cache: &BTreeMap<String, u64>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(cache)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))?;
    if fs::metadata(path)?.permissions().readonly() {
        bail!("{} is not writable", path.display());
    }
    Ok(())
}
