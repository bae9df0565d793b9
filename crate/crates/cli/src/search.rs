//! The `search` command: orbit search, exact cover and isomorphism reduction
//! with a single ordered writer.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hexad_core::canon::{automorphism_group, IsoReducer};
use hexad_core::km::{FoundDesign, HexadFilter, SearchSpace, SearchStats};
use hexad_core::{classify, PermGroup};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::io::{ensure_dir, read_cache, write_cache, DesignFile};

pub struct SearchArgs {
    pub group: PermGroup,
    pub filter: HexadFilter,
    pub limit: Option<u64>,
    pub candidates: Option<u64>,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub libexact: bool,
}

#[derive(Serialize)]
struct DesignRecord<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    index: u64,
    class: u64,
    hexad_orbits: &'a [usize],
    tetrad_orbits: &'a [usize],
    #[serde(flatten)]
    design: DesignFile,
}

/// Outcome counts of a search run.
#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub v: usize,
    pub group_order: u64,
    pub unions: u64,
    pub candidates: u64,
    pub infeasible: u64,
    pub solutions: u64,
    pub classes: u64,
    pub capped: bool,
}

struct Writer {
    designs: Box<dyn Write>,
    reducer: IsoReducer,
    class_ids: Vec<u64>,
    cache: BTreeMap<String, u64>,
    next_id: u64,
    solutions: u64,
}

impl Writer {
    fn emit(&mut self, space: &SearchSpace, found: FoundDesign) -> Result<()> {
        let (idx, is_new) = self.reducer.insert(found.design.clone());
        if is_new {
            let id = self.next_id;
            self.next_id += 1;
            self.class_ids.push(id);
        }
        let rec = DesignRecord {
            kind: "design",
            index: self.solutions,
            class: self.class_ids[idx],
            hexad_orbits: &found.hexad_orbits,
            tetrad_orbits: &found.tetrad_orbits,
            design: DesignFile::with_orbits(&found.design, found.baseblocks(space), space.group()),
        };
        serde_json::to_writer(&mut self.designs, &rec)?;
        self.designs.write_all(b"\n")?;
        self.solutions += 1;
        Ok(())
    }
}

fn open(out: &Option<PathBuf>, name: &str) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(dir) => {
            let p = dir.join(name);
            Box::new(BufWriter::new(File::create(&p).with_context(|| format!("creating {}", p.display()))?))
        }
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_libexact(dir: &Path, index: u64, space: &SearchSpace, cand: &hexad_core::HexadCandidate) -> Result<()> {
    let km = space.km_matrix(cand)?;
    let dir = dir.join("km");
    fs::create_dir_all(&dir)?;
    fs::write(dir.join(format!("candidate_{index:06}.txt")), km.to_cover_matrix().to_libexact_text())?;
    Ok(())
}

/// Runs the search; returns the summary. Output goes to `out` if given,
/// otherwise JSON lines on stdout.
pub fn run(args: &SearchArgs) -> Result<Summary> {
    if let Some(dir) = &args.out {
        ensure_dir(dir)?;
    }
    let space = SearchSpace::new(&args.group, hexad_core::orbit::DEFAULT_SUBSET_CAP)?;
    let cache = match &args.cache {
        Some(p) => read_cache(p)?,
        None => BTreeMap::new(),
    };
    let mut w = Writer {
        designs: open(&args.out, "designs.jsonl")?,
        reducer: IsoReducer::new(),
        class_ids: Vec::new(),
        next_id: 0,
        cache,
        solutions: 0,
    };
    let mut stats = SearchStats::default();
    let mut cands = space.candidates(args.filter);
    let limit_hit = |w: &Writer| args.limit.is_some_and(|l| w.solutions >= l);
    let mut index = 0u64;
    let batch = if args.jobs > 1 { args.jobs * 4 } else { 1 };
    'outer: loop {
        if limit_hit(&w) {
            stats.capped = true;
            break;
        }
        let mut chunk = Vec::with_capacity(batch);
        while chunk.len() < batch {
            if args.candidates.is_some_and(|c| index + chunk.len() as u64 >= c) {
                if cands.next().is_some() {
                    stats.capped = true;
                }
                break;
            }
            match cands.next() {
                Some(c) => chunk.push(c),
                None => break,
            }
        }
        if chunk.is_empty() {
            break;
        }
        if args.libexact {
            if let Some(dir) = &args.out {
                for (i, c) in chunk.iter().enumerate() {
                    write_libexact(dir, index + i as u64, &space, c)?;
                }
            }
        }
        let remaining = args.limit.map(|l| l - w.solutions);
        if batch == 1 {
            match space.extend(&chunk[0], remaining)? {
                None => stats.infeasible += 1,
                Some(mut ext) => {
                    while let Some(d) = ext.next_design(&space) {
                        w.emit(&space, d?)?;
                    }
                }
            }
        } else {
            let results: Vec<Result<Option<Vec<FoundDesign>>>> = chunk
                .par_iter()
                .map(|c| -> Result<Option<Vec<FoundDesign>>> {
                    Ok(match space.extend(c, remaining)? {
                        Some(ext) => Some(ext.collect_all(&space)?),
                        None => None,
                    })
                })
                .collect();
            for r in results {
                match r? {
                    None => stats.infeasible += 1,
                    Some(designs) => {
                        for d in designs {
                            if limit_hit(&w) {
                                stats.capped = true;
                                break 'outer;
                            }
                            w.emit(&space, d)?;
                        }
                    }
                }
            }
        }
        index += chunk.len() as u64;
        if args.candidates.is_some_and(|c| index >= c) && stats.capped {
            break;
        }
    }
    let cstats = *cands.stats();
    w.designs.flush()?;
    let mut writer = w;
    let classes = std::mem::take(&mut writer.reducer).finish();

    let mut class_out = open(&args.out, "classes.jsonl")?;
    for (i, c) in classes.iter().enumerate() {
        let hex = c.certificate.to_hex();
        let id = match writer.cache.get(&hex) {
            Some(&id) => id,
            None => {
                let id = writer.cache.values().max().map_or(0, |m| m + 1);
                writer.cache.insert(hex.clone(), id);
                id
            }
        };
        let order = automorphism_group(&c.representative).map(|(_, o)| o).ok();
        let mut rec = serde_json::to_value(DesignFile::from_system(&c.representative))?;
        let obj = rec.as_object_mut().unwrap();
        obj.insert("type".into(), json!("class"));
        obj.insert("class".into(), json!(writer.class_ids[i]));
        obj.insert("cache_id".into(), json!(id));
        obj.insert("certificate".into(), json!(hex));
        obj.insert("multiplicity".into(), json!(c.multiplicity));
        obj.insert("hexads".into(), json!(classify(&c.representative.hexads()).label()));
        obj.insert("automorphism_order".into(), json!(order));
        serde_json::to_writer(&mut class_out, &rec)?;
        class_out.write_all(b"\n")?;
    }
    class_out.flush()?;
    if let Some(p) = &args.cache {
        write_cache(p, &writer.cache)?;
    }

    let summary = Summary {
        v: space.v(),
        group_order: space.group().order().unwrap_or(0),
        unions: cstats.unions,
        candidates: cstats.candidates,
        infeasible: stats.infeasible,
        solutions: writer.solutions,
        classes: classes.len() as u64,
        capped: stats.capped,
    };
    let mut rec = serde_json::to_value(&summary)?;
    rec.as_object_mut().unwrap().insert("type".into(), json!("summary"));
    let mut out = open(&args.out, "summary.json")?;
    serde_json::to_writer(&mut out, &rec)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(summary)
}
