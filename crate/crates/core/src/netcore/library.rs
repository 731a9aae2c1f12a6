//! Cell library and technology profile, plus the keyed text format and the
//! four bundled presets.
//!
//! Electrical coefficients in the presets are synthetic: simple per-class
//! bases scaled by drive strength and by per-library speed/power factors.
//! They exist so timing, power and IR analyses have consistent inputs; they
//! are not characterized values. See the comment block in the asset files.

use std::collections::HashMap;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgPin {
    /// Power/ground on buried rails; cell height is RT + 1 tracks.
    Bpr,
    /// Power/ground on M0; cell height is RT + 2 tracks.
    M0,
}

#[derive(Debug, Clone)]
pub struct TechProfile {
    pub cpp_nm: f64,
    pub m0p_nm: f64,
    pub m1p_nm: f64,
    pub m2p_nm: f64,
    pub fin: u32,
    pub rt: u32,
    pub pg_pin: PgPin,
    pub ch_tracks: u32,
    pub vop_v: f64,
    /// Lumped wire delay coefficient, ps per micron of routed length.
    pub wire_delay_ps_per_um: f64,
}

impl TechProfile {
    pub fn row_height_nm(&self) -> f64 {
        self.ch_tracks as f64 * self.m0p_nm
    }

    /// Cell-height rule: CH = RT + 2 for M0 power pins, RT + 1 for BPR.
    pub fn expected_ch(&self) -> u32 {
        match self.pg_pin {
            PgPin::M0 => self.rt + 2,
            PgPin::Bpr => self.rt + 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cpp_nm <= 0.0 || self.m0p_nm <= 0.0 || self.m1p_nm <= 0.0 || self.m2p_nm <= 0.0 {
            return Err(Error::Library("pitches must be positive".into()));
        }
        if !matches!(self.fin, 2 | 3) {
            return Err(Error::Library(format!("fin must be 2 or 3, got {}", self.fin)));
        }
        if !matches!(self.rt, 4 | 5) {
            return Err(Error::Library(format!("rt must be 4 or 5, got {}", self.rt)));
        }
        if self.ch_tracks != self.expected_ch() {
            return Err(Error::Library(format!(
                "ch={} inconsistent with rt={} pgpin={:?} (expected {})",
                self.ch_tracks,
                self.rt,
                self.pg_pin,
                self.expected_ch()
            )));
        }
        if self.vop_v <= 0.0 {
            return Err(Error::Library("vop must be positive".into()));
        }
        Ok(())
    }

    /// True when the M1/CPP gear ratio is non-integer, which forces cluster
    /// members onto even CPP sites (30/45 in the bundled technology).
    pub fn even_site_alignment(&self) -> bool {
        let ratio = self.cpp_nm / self.m1p_nm;
        (ratio - ratio.round()).abs() > 1e-9
    }
}

#[derive(Debug, Clone)]
pub struct CellSpec {
    pub name: String,
    pub width_cpp: u32,
    pub is_sequential: bool,
    pub intrinsic_delay_ps: f64,
    pub load_delay_ps_per_fanout: f64,
    pub leakage_mw: f64,
    pub dyn_energy_mw_per_ghz: f64,
}

impl CellSpec {
    fn validate(&self) -> Result<()> {
        if self.width_cpp < 1 {
            return Err(Error::Library(format!("cell {}: width must be >= 1", self.name)));
        }
        for (k, v) in [
            ("d0", self.intrinsic_delay_ps),
            ("d1", self.load_delay_ps_per_fanout),
            ("leak", self.leakage_mw),
            ("edyn", self.dyn_energy_mw_per_ghz),
        ] {
            if !(v >= 0.0) {
                return Err(Error::Library(format!("cell {}: {k} must be >= 0", self.name)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct CellLibrary {
    cells: Vec<CellSpec>,
    index: HashMap<String, usize>,
}

impl CellLibrary {
    pub fn new(cells: Vec<CellSpec>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            c.validate()?;
            if index.insert(c.name.clone(), i).is_some() {
                return Err(Error::Library(format!("duplicate cell `{}`", c.name)));
            }
        }
        Ok(Self { cells, index })
    }

    pub fn get(&self, name: &str) -> Option<&CellSpec> {
        self.index.get(name).map(|&i| &self.cells[i])
    }

    pub fn cells(&self) -> &[CellSpec] {
        &self.cells
    }

    /// Maximum width among combinational cells, in CPP. Zero for a
    /// sequential-only library.
    pub fn max_comb_width(&self) -> u32 {
        self.cells
            .iter()
            .filter(|c| !c.is_sequential)
            .map(|c| c.width_cpp)
            .max()
            .unwrap_or(0)
    }

    /// Maximum width over all cells, the clustering capacity w_max.
    pub fn max_width(&self) -> u32 {
        self.cells.iter().map(|c| c.width_cpp).max().unwrap_or(0)
    }

    /// Registers a synthesized cell (cluster proxies). Errors on name clash
    /// with a differing spec; re-registering an identical spec is a no-op.
    pub fn add_cell(&mut self, spec: CellSpec) -> Result<()> {
        if let Some(existing) = self.get(&spec.name) {
            if existing.width_cpp == spec.width_cpp && existing.is_sequential == spec.is_sequential
            {
                return Ok(());
            }
            return Err(Error::Library(format!("conflicting respec of `{}`", spec.name)));
        }
        spec.validate()?;
        self.index.insert(spec.name.clone(), self.cells.len());
        self.cells.push(spec);
        Ok(())
    }
}

/// The four bundled technology/library presets, (Fin, RT, PGpin, CH):
/// lib1 = (2, 4, BPR, 5T), lib2 = (2, 4, M0, 6T),
/// lib3 = (3, 5, BPR, 6T), lib4 = (3, 5, M0, 7T).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LibPreset {
    Lib1,
    Lib2,
    Lib3,
    Lib4,
}

impl LibPreset {
    pub const ALL: [LibPreset; 4] = [LibPreset::Lib1, LibPreset::Lib2, LibPreset::Lib3, LibPreset::Lib4];

    pub fn id(self) -> &'static str {
        match self {
            LibPreset::Lib1 => "lib1",
            LibPreset::Lib2 => "lib2",
            LibPreset::Lib3 => "lib3",
            LibPreset::Lib4 => "lib4",
        }
    }

    fn text(self) -> &'static str {
        match self {
            LibPreset::Lib1 => include_str!("../../assets/lib1.lib"),
            LibPreset::Lib2 => include_str!("../../assets/lib2.lib"),
            LibPreset::Lib3 => include_str!("../../assets/lib3.lib"),
            LibPreset::Lib4 => include_str!("../../assets/lib4.lib"),
        }
    }

    pub fn load(self) -> (CellLibrary, TechProfile) {
        load_library(self.text()).expect("bundled presets are valid")
    }

    pub fn from_id(s: &str) -> Option<LibPreset> {
        match s.to_ascii_lowercase().as_str() {
            "lib1" => Some(LibPreset::Lib1),
            "lib2" => Some(LibPreset::Lib2),
            "lib3" => Some(LibPreset::Lib3),
            "lib4" => Some(LibPreset::Lib4),
            _ => None,
        }
    }
}

fn parse_kv(line: &str, lineno: usize) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for tok in line.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or(Error::Parse {
            line: lineno,
            msg: format!("expected key=value, got `{tok}`"),
        })?;
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn parse_f64(v: &str, key: &str, lineno: usize) -> Result<f64> {
    v.parse().map_err(|_| Error::Parse {
        line: lineno,
        msg: format!("invalid number for `{key}`: `{v}`"),
    })
}

/// Parses a library document. Format:
///
/// ```text
/// tech cpp=45 m0p=24 m1p=30 m2p=24 fin=2 rt=4 pgpin=M0 ch=6 vop=0.7 wire=0.9
/// cell INV_X1 width=2 seq=0 d0=9.0 d1=3.6 leak=8e-6 edyn=4.8e-4
/// ```
///
/// `#` starts a comment. The tech line must precede cell lines.
pub fn load_library(text: &str) -> Result<(CellLibrary, TechProfile)> {
    let mut tech: Option<TechProfile> = None;
    let mut cells = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match word {
            "tech" => {
                let mut t = TechProfile {
                    cpp_nm: 45.0,
                    m0p_nm: 24.0,
                    m1p_nm: 30.0,
                    m2p_nm: 24.0,
                    fin: 2,
                    rt: 4,
                    pg_pin: PgPin::M0,
                    ch_tracks: 0,
                    vop_v: 0.7,
                    wire_delay_ps_per_um: 0.9,
                };
                let mut ch_given = false;
                for (k, v) in parse_kv(rest, lineno)? {
                    match k.as_str() {
                        "cpp" => t.cpp_nm = parse_f64(&v, &k, lineno)?,
                        "m0p" => t.m0p_nm = parse_f64(&v, &k, lineno)?,
                        "m1p" => t.m1p_nm = parse_f64(&v, &k, lineno)?,
                        "m2p" => t.m2p_nm = parse_f64(&v, &k, lineno)?,
                        "fin" => t.fin = parse_f64(&v, &k, lineno)? as u32,
                        "rt" => t.rt = parse_f64(&v, &k, lineno)? as u32,
                        "ch" => {
                            t.ch_tracks = parse_f64(&v, &k, lineno)? as u32;
                            ch_given = true;
                        }
                        "vop" => t.vop_v = parse_f64(&v, &k, lineno)?,
                        "wire" => t.wire_delay_ps_per_um = parse_f64(&v, &k, lineno)?,
                        "pgpin" => {
                            t.pg_pin = match v.to_ascii_uppercase().as_str() {
                                "BPR" => PgPin::Bpr,
                                "M0" => PgPin::M0,
                                _ => {
                                    return Err(Error::Parse {
                                        line: lineno,
                                        msg: format!("pgpin must be BPR or M0, got `{v}`"),
                                    })
                                }
                            }
                        }
                        _ => {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: format!("unknown tech key `{k}`"),
                            })
                        }
                    }
                }
                if !ch_given {
                    t.ch_tracks = t.expected_ch();
                }
                t.validate()?;
                tech = Some(t);
            }
            "cell" => {
                let (name, kv) = rest.split_once(char::is_whitespace).ok_or(Error::Parse {
                    line: lineno,
                    msg: "cell line needs a name and fields".into(),
                })?;
                let mut spec = CellSpec {
                    name: name.to_string(),
                    width_cpp: 0,
                    is_sequential: false,
                    intrinsic_delay_ps: 0.0,
                    load_delay_ps_per_fanout: 0.0,
                    leakage_mw: 0.0,
                    dyn_energy_mw_per_ghz: 0.0,
                };
                for (k, v) in parse_kv(kv, lineno)? {
                    match k.as_str() {
                        "width" => spec.width_cpp = parse_f64(&v, &k, lineno)? as u32,
                        "seq" => spec.is_sequential = v == "1" || v == "true",
                        "d0" => spec.intrinsic_delay_ps = parse_f64(&v, &k, lineno)?,
                        "d1" => spec.load_delay_ps_per_fanout = parse_f64(&v, &k, lineno)?,
                        "leak" => spec.leakage_mw = parse_f64(&v, &k, lineno)?,
                        "edyn" => spec.dyn_energy_mw_per_ghz = parse_f64(&v, &k, lineno)?,
                        _ => {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: format!("unknown cell key `{k}`"),
                            })
                        }
                    }
                }
                cells.push(spec);
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown directive `{word}`"),
                })
            }
        }
    }
    let tech = tech.ok_or(Error::Library("missing tech line".into()))?;
    Ok((CellLibrary::new(cells)?, tech))
}

/// Emits a library document parseable by [`load_library`].
pub fn emit_library(lib: &CellLibrary, tech: &TechProfile) -> String {
    let pg = match tech.pg_pin {
        PgPin::Bpr => "BPR",
        PgPin::M0 => "M0",
    };
    let mut out = format!(
        "tech cpp={} m0p={} m1p={} m2p={} fin={} rt={} pgpin={} ch={} vop={} wire={}\n",
        tech.cpp_nm,
        tech.m0p_nm,
        tech.m1p_nm,
        tech.m2p_nm,
        tech.fin,
        tech.rt,
        pg,
        tech.ch_tracks,
        tech.vop_v,
        tech.wire_delay_ps_per_um
    );
    let mut cells: Vec<&CellSpec> = lib.cells().iter().collect();
    cells.sort_by(|a, b| a.name.cmp(&b.name));
    for c in cells {
        out.push_str(&format!(
            "cell {} width={} seq={} d0={} d1={} leak={} edyn={}\n",
            c.name,
            c.width_cpp,
            u8::from(c.is_sequential),
            c.intrinsic_delay_ps,
            c.load_delay_ps_per_fanout,
            c.leakage_mw,
            c.dyn_energy_mw_per_ghz
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_tech_rules() {
        // lib2: M0 pins, RT 4 -> CH 6, row height 144 nm.
        let (_, t2) = LibPreset::Lib2.load();
        assert_eq!(t2.ch_tracks, 6);
        assert!((t2.row_height_nm() - 144.0).abs() < 1e-9);
        // lib1: BPR pins, RT 4 -> CH 5 via the RT+1 rule.
        let (_, t1) = LibPreset::Lib1.load();
        assert_eq!(t1.ch_tracks, 5);
        // lib4: M0 pins, RT 5 -> CH 7.
        let (_, t4) = LibPreset::Lib4.load();
        assert_eq!(t4.ch_tracks, 7);
    }

    #[test]
    fn preset_cell_counts() {
        for p in LibPreset::ALL {
            let (lib, tech) = p.load();
            assert_eq!(lib.cells().len(), 41, "{}", p.id());
            assert_eq!(lib.max_comb_width(), 12);
            assert!(tech.even_site_alignment());
        }
    }

    #[test]
    fn ch_inconsistency_rejected() {
        // RT=4 with M0 pins requires CH=6.
        let text = "tech cpp=45 m0p=24 m1p=30 m2p=24 fin=2 rt=4 pgpin=M0 ch=5 vop=0.7\n";
        assert!(load_library(text).is_err());
    }

    #[test]
    fn emit_round_trips() {
        let (lib, tech) = LibPreset::Lib3.load();
        let text = emit_library(&lib, &tech);
        let (lib2, tech2) = load_library(&text).unwrap();
        assert_eq!(lib.cells().len(), lib2.cells().len());
        assert_eq!(tech.ch_tracks, tech2.ch_tracks);
        for c in lib.cells() {
            let c2 = lib2.get(&c.name).unwrap();
            assert_eq!(c.width_cpp, c2.width_cpp);
            assert_eq!(c.is_sequential, c2.is_sequential);
            assert!((c.intrinsic_delay_ps - c2.intrinsic_delay_ps).abs() < 1e-12);
        }
    }
}
