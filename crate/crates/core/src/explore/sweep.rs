//! Experiment orchestration: the keyed-text experiment config, the grid
//! expansion, parallel execution with append-only persistence, and resume
//! from a partial row set.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::cwreg::{cwr_fc_cluster, synthesize_cluster_library};
use crate::explore::pipeline::{run_point, PointSpec};
use crate::explore::RunRecord;
use crate::netcore::{
    load_library, parse_netlist, width_regularize_naive, CellLibrary, LibPreset, TechProfile,
    TopoParams,
};
use crate::pdnet::{PdnConfig, PdnKind, TapScheme};
use crate::physdes::RouteConfig;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub enum DesignSource {
    File(PathBuf),
    Generated { params: TopoParams, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct DesignSpec {
    pub id: String,
    pub source: DesignSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegMode {
    Naive,
    Clustered,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub designs: Vec<DesignSpec>,
    pub libs: Vec<String>,
    pub pdns: Vec<PdnKind>,
    pub tap_pitches: Vec<u32>,
    pub tap_schemes: Vec<TapScheme>,
    pub utils: Vec<f64>,
    pub clkps: Vec<f64>,
    pub seeds: Vec<u64>,
    pub activity: f64,
    pub reg_mode: RegMode,
    pub edp_literal: bool,
    pub route: RouteConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            designs: Vec::new(),
            libs: vec!["lib2".into()],
            pdns: vec![PdnKind::Fs],
            tap_pitches: vec![48],
            tap_schemes: vec![TapScheme::Column],
            utils: vec![0.8],
            clkps: vec![0.2],
            seeds: vec![1],
            activity: 0.2,
            reg_mode: RegMode::Naive,
            edp_literal: false,
            route: RouteConfig::default(),
        }
    }
}

fn parse_list<T: std::str::FromStr>(v: &str, what: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::Config(format!("bad {what}: `{s}`"))))
        .collect()
}

impl ExperimentConfig {
    /// Parses the keyed-text format. One directive per line:
    ///
    /// ```text
    /// design gen id=d1 n_inst=2000 n_prim=64 d_avg=2.3 b_avg=0.5 t_avg=5 s_ratio=0.1 seed=1
    /// design file id=aes path=aes.net
    /// libs lib2,lib3
    /// pdns fs,fb,bs,bb
    /// taps pitch=48 scheme=column
    /// grid util=0.74,0.80,0.86 clkp=0.16,0.20 seeds=1
    /// mode reg=naive activity=0.2
    /// ```
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let kvs: Vec<(&str, &str)> =
                rest.split_whitespace().filter_map(|t| t.split_once('=')).collect();
            let get = |k: &str| kvs.iter().find(|(key, _)| *key == k).map(|(_, v)| *v);
            match word {
                "design" => {
                    let sub = rest.split_whitespace().next().unwrap_or("");
                    let id = get("id")
                        .ok_or(Error::Config(format!("line {lineno}: design needs id=")))?
                        .to_string();
                    match sub {
                        "gen" => {
                            let f = |k: &str| -> Result<f64> {
                                get(k)
                                    .ok_or(Error::Config(format!("line {lineno}: missing {k}=")))?
                                    .parse()
                                    .map_err(|_| Error::Config(format!("line {lineno}: bad {k}")))
                            };
                            let params = TopoParams::new(
                                f("n_inst")? as u32,
                                f("n_prim")? as u32,
                                f("d_avg")?,
                                f("b_avg")?,
                                f("t_avg")?,
                                f("s_ratio")?,
                            );
                            let seed = f("seed").unwrap_or(1.0) as u64;
                            cfg.designs.push(DesignSpec {
                                id,
                                source: DesignSource::Generated { params, seed },
                            });
                        }
                        "file" => {
                            let path = get("path").ok_or(Error::Config(format!(
                                "line {lineno}: design file needs path="
                            )))?;
                            cfg.designs.push(DesignSpec {
                                id,
                                source: DesignSource::File(PathBuf::from(path)),
                            });
                        }
                        other => {
                            return Err(Error::Config(format!(
                                "line {lineno}: unknown design source `{other}`"
                            )))
                        }
                    }
                }
                "libs" => cfg.libs = rest.split(',').map(|s| s.trim().to_string()).collect(),
                "pdns" => {
                    cfg.pdns = rest
                        .split(',')
                        .map(|s| {
                            PdnKind::from_id(s.trim()).ok_or(Error::Config(format!(
                                "line {lineno}: unknown pdn `{s}`"
                            )))
                        })
                        .collect::<Result<_>>()?
                }
                "taps" => {
                    if let Some(p) = get("pitch") {
                        cfg.tap_pitches = parse_list(p, "tap pitch")?;
                    }
                    if let Some(s) = get("scheme") {
                        cfg.tap_schemes = s
                            .split(',')
                            .map(|x| {
                                TapScheme::from_id(x.trim()).ok_or(Error::Config(format!(
                                    "line {lineno}: unknown scheme `{x}`"
                                )))
                            })
                            .collect::<Result<_>>()?;
                    }
                }
                "grid" => {
                    if let Some(u) = get("util") {
                        cfg.utils = parse_list(u, "util")?;
                    }
                    if let Some(c) = get("clkp") {
                        cfg.clkps = parse_list(c, "clkp")?;
                    }
                    if let Some(s) = get("seeds") {
                        cfg.seeds = parse_list(s, "seed")?;
                    }
                }
                "mode" => {
                    if let Some(r) = get("reg") {
                        cfg.reg_mode = match r {
                            "naive" => RegMode::Naive,
                            "clustered" => RegMode::Clustered,
                            _ => {
                                return Err(Error::Config(format!(
                                    "line {lineno}: unknown reg mode `{r}`"
                                )))
                            }
                        };
                    }
                    if let Some(a) = get("activity") {
                        cfg.activity = a
                            .parse()
                            .map_err(|_| Error::Config(format!("line {lineno}: bad activity")))?;
                    }
                    if get("edp").map(|v| v == "literal").unwrap_or(false) {
                        cfg.edp_literal = true;
                    }
                    if let Some(c) = get("capacity_scale") {
                        cfg.route.capacity_scale = c.parse().map_err(|_| {
                            Error::Config(format!("line {lineno}: bad capacity_scale"))
                        })?;
                    }
                }
                other => {
                    return Err(Error::Config(format!("line {lineno}: unknown directive `{other}`")))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.designs.is_empty() {
            return Err(Error::Config("no designs configured".into()));
        }
        for grid in [
            ("libs", self.libs.is_empty()),
            ("pdns", self.pdns.is_empty()),
            ("utils", self.utils.is_empty()),
            ("clkps", self.clkps.is_empty()),
            ("seeds", self.seeds.is_empty()),
        ] {
            if grid.1 {
                return Err(Error::Config(format!("empty {} grid", grid.0)));
            }
        }
        if self.pdns.iter().any(|p| p.needs_taps())
            && (self.tap_pitches.is_empty() || self.tap_schemes.is_empty())
        {
            return Err(Error::Config("tapped PDNs need tap pitch and scheme".into()));
        }
        for lib in &self.libs {
            if LibPreset::from_id(lib).is_none() && !Path::new(lib).exists() {
                return Err(Error::Config(format!("unknown library `{lib}`")));
            }
        }
        Ok(())
    }
}

fn load_lib(id: &str) -> Result<(CellLibrary, TechProfile)> {
    match LibPreset::from_id(id) {
        Some(p) => Ok(p.load()),
        None => load_library(&fs::read_to_string(id)?),
    }
}

/// A design prepared for one library: regularized hypergraph, effective
/// library (with cluster cells when clustering), and the uniform span.
struct Prepared {
    h: crate::netcore::Hypergraph,
    lib: CellLibrary,
    tech: TechProfile,
    span: u32,
}

fn prepare(design: &DesignSpec, lib_id: &str, mode: RegMode) -> Result<Prepared> {
    let (lib, tech) = load_lib(lib_id)?;
    let h = match &design.source {
        DesignSource::File(path) => parse_netlist(&fs::read_to_string(path)?, &lib)?,
        DesignSource::Generated { params, seed } => {
            crate::angen::generate_netlist(params, &lib, *seed)?
        }
    };
    let span = lib.max_width();
    match mode {
        RegMode::Naive => Ok(Prepared { h: width_regularize_naive(&h, &lib), lib, tech, span }),
        RegMode::Clustered => {
            let (hc, map) = cwr_fc_cluster(&h, span, 20)?;
            let lib2 = synthesize_cluster_library(&h, &map, &hc, &lib)?;
            Ok(Prepared { h: hc, lib: lib2, tech, span })
        }
    }
}

fn expand_grid(cfg: &ExperimentConfig) -> Vec<PointSpec> {
    let mut out = Vec::new();
    for design in &cfg.designs {
        for lib in &cfg.libs {
            for &pdn in &cfg.pdns {
                let tap_combos: Vec<(Option<u32>, Option<TapScheme>)> = if pdn.needs_taps() {
                    cfg.tap_pitches
                        .iter()
                        .flat_map(|&p| cfg.tap_schemes.iter().map(move |&s| (Some(p), Some(s))))
                        .collect()
                } else {
                    vec![(None, None)]
                };
                for (pitch, scheme) in tap_combos {
                    for &util in &cfg.utils {
                        for &clkp in &cfg.clkps {
                            for &seed in &cfg.seeds {
                                let pdn_cfg = PdnConfig::new(pdn, pitch, scheme)
                                    .expect("grid combos are valid");
                                out.push(PointSpec {
                                    design: design.id.clone(),
                                    lib_id: lib.clone(),
                                    pdn: pdn_cfg,
                                    util,
                                    clkp_ns: clkp,
                                    seed,
                                    activity: cfg.activity,
                                    edp_literal: cfg.edp_literal,
                                    route: cfg.route.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn spec_key(s: &PointSpec) -> String {
    format!(
        "{}|{}|{}|{}|{}|{:.4}|{:.4}|{}",
        s.design,
        s.lib_id,
        s.pdn.kind.id(),
        s.pdn.tap_pitch_cpp.map_or(String::from("-"), |p| p.to_string()),
        s.pdn.tap_scheme.map_or(String::from("-"), |x| x.id().to_string()),
        s.util,
        s.clkp_ns,
        s.seed
    )
}

/// Runs the sweep, appending rows to `<out>/runs.csv` as they finish and
/// rewriting the file in canonical grid order at completion. A partial file
/// from an interrupted run resumes without recomputing finished points; the
/// final bytes match an uninterrupted run.
pub fn run_sweep(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    fs::create_dir_all(out_dir)?;
    let runs_path = out_dir.join("runs.csv");

    let mut done: Vec<RunRecord> = Vec::new();
    if runs_path.exists() {
        for (i, line) in fs::read_to_string(&runs_path)?.lines().enumerate() {
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            done.push(RunRecord::from_csv_row(line)?);
        }
    }
    let have: HashSet<String> = done.iter().map(|r| r.key()).collect();

    let grid = expand_grid(cfg);
    let todo: Vec<&PointSpec> = grid.iter().filter(|s| !have.contains(&spec_key(s))).collect();

    // Designs prepare once per (design, lib, mode).
    let mut prepared: Vec<((String, String), std::result::Result<Prepared, String>)> = Vec::new();
    for design in &cfg.designs {
        for lib in &cfg.libs {
            let key = (design.id.clone(), lib.clone());
            let p = prepare(design, lib, cfg.reg_mode).map_err(|e| e.to_string());
            prepared.push((key, p));
        }
    }
    let lookup = |d: &str, l: &str| {
        prepared
            .iter()
            .find(|((di, li), _)| di == d && li == l)
            .map(|(_, p)| p)
            .expect("prepared for every grid point")
    };

    // Append rows as they complete; a mutex keeps whole lines intact.
    let file = fs::OpenOptions::new().create(true).append(true).open(&runs_path)?;
    let has_content = fs::metadata(&runs_path)?.len() > 0;
    let writer = Mutex::new(file);
    if !has_content {
        writeln!(writer.lock().unwrap(), "{}", RunRecord::CSV_HEADER)?;
    }

    let fresh: Vec<RunRecord> = crate::par::map_slice(&todo, |spec| {
        let rec = match lookup(&spec.design, &spec.lib_id) {
            Ok(prep) => run_point(spec, &prep.h, &prep.lib, &prep.tech, prep.span),
            Err(msg) => super::pipeline::error_record(spec, msg),
        };
        let mut w = writer.lock().unwrap();
        let _ = writeln!(w, "{}", rec.to_csv_row());
        let _ = w.flush();
        rec
    });
    drop(writer);

    // Canonical rewrite in grid order.
    let mut by_key: std::collections::HashMap<String, RunRecord> = done
        .into_iter()
        .map(|r| (r.key(), r))
        .chain(fresh.into_iter().map(|r| (r.key(), r)))
        .collect();
    let mut ordered = Vec::with_capacity(grid.len());
    for spec in &grid {
        let rec = by_key
            .remove(&spec_key(spec))
            .ok_or_else(|| Error::Config("missing row after sweep".into()))?;
        ordered.push(rec);
    }
    let mut text = String::from(RunRecord::CSV_HEADER);
    text.push('\n');
    for r in &ordered {
        text.push_str(&r.to_csv_row());
        text.push('\n');
    }
    fs::write(&runs_path, text)?;
    Ok(ordered)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config(dir: &Path) -> ExperimentConfig {
        let text = "\
design gen id=t n_inst=220 n_prim=12 d_avg=2.3 b_avg=0.5 t_avg=4.5 s_ratio=0.1 seed=3
libs lib2
pdns fs,bb
grid util=0.75,0.85 clkp=0.3 seeds=1
mode reg=naive activity=0.2
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        fs::create_dir_all(dir).unwrap();
        cfg
    }

    #[test]
    fn sweep_shape_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let out_a = dir.path().join("a");
        let cfg = tiny_config(&out_a);
        let rows = run_sweep(&cfg, &out_a).unwrap();
        assert_eq!(rows.len(), 4); // 2 pdns x 2 utils
        assert!(rows.iter().all(|r| r.has_outputs()));

        // Rerun over the completed directory: identical bytes.
        let before = fs::read(out_a.join("runs.csv")).unwrap();
        run_sweep(&cfg, &out_a).unwrap();
        let after = fs::read(out_a.join("runs.csv")).unwrap();
        assert_eq!(before, after);

        // Fresh directory: identical bytes too.
        let out_b = dir.path().join("b");
        run_sweep(&cfg, &out_b).unwrap();
        let b = fs::read(out_b.join("runs.csv")).unwrap();
        assert_eq!(before, b);
    }

    #[test]
    fn resume_from_partial_file_matches() {
        let dir = tempfile::tempdir().unwrap();
        let out_full = dir.path().join("full");
        let cfg = tiny_config(&out_full);
        run_sweep(&cfg, &out_full).unwrap();
        let full = fs::read_to_string(out_full.join("runs.csv")).unwrap();

        // Simulate an interrupted run: keep the header and first two rows.
        let out_part = dir.path().join("part");
        fs::create_dir_all(&out_part).unwrap();
        let partial: Vec<&str> = full.lines().take(3).collect();
        fs::write(out_part.join("runs.csv"), format!("{}\n", partial.join("\n"))).unwrap();
        run_sweep(&cfg, &out_part).unwrap();
        let resumed = fs::read_to_string(out_part.join("runs.csv")).unwrap();
        assert_eq!(full, resumed);
    }

    #[test]
    fn config_errors_are_reported() {
        assert!(ExperimentConfig::parse("libs lib2\n").is_err()); // no designs
        assert!(ExperimentConfig::parse("bogus directive\n").is_err());
        let text = "\
design gen id=t n_inst=100 n_prim=10 d_avg=2.2 b_avg=0.5 t_avg=4 s_ratio=0.1
libs nosuchlib
";
        assert!(ExperimentConfig::parse(text).is_err());
    }
}
