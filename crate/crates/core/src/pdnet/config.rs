//! PDN configuration: the four network options, stripe geometry table,
//! tap-cell parameters, and the keyed text format.
//!
//! Default stripe geometry per layer group (pitch/width/spacing in um,
//! density = fraction of routing tracks occupied):
//! M3 1.08/0.012/0.508 @ 4%, M4 1.152/0.032/0.544 @ 11%,
//! M5-M11 5.0/1.0/1.5 @ 20%, M12-M13 4.32/1.8/0.36 @ 100%.
//! Backside BM1-BM2 reuse the M12-M13 geometry.

use crate::{Error, Result};

/// The four PDN options: frontside/backside, with or without buried rails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PdnKind {
    /// Frontside PDN without BPR.
    Fs,
    /// Frontside PDN with BPR; needs tap cells (BPR to frontside stack).
    Fb,
    /// Backside PDN without BPR; needs tap cells (backside to M0 rails).
    Bs,
    /// Backside PDN with BPR; rails reach the backside directly.
    Bb,
}

impl PdnKind {
    pub const ALL: [PdnKind; 4] = [PdnKind::Fs, PdnKind::Fb, PdnKind::Bs, PdnKind::Bb];

    pub fn id(self) -> &'static str {
        match self {
            PdnKind::Fs => "fs",
            PdnKind::Fb => "fb",
            PdnKind::Bs => "bs",
            PdnKind::Bb => "bb",
        }
    }

    pub fn from_id(s: &str) -> Option<PdnKind> {
        match s.to_ascii_lowercase().as_str() {
            "fs" | "p_fs" | "pfs" => Some(PdnKind::Fs),
            "fb" | "p_fb" | "pfb" => Some(PdnKind::Fb),
            "bs" | "p_bs" | "pbs" => Some(PdnKind::Bs),
            "bb" | "p_bb" | "pbb" => Some(PdnKind::Bb),
            _ => None,
        }
    }

    /// Tap cells are required exactly for the two configurations that bridge
    /// PDN tiers through reserved placement sites.
    pub fn needs_taps(self) -> bool {
        matches!(self, PdnKind::Fb | PdnKind::Bs)
    }

    pub fn backside(self) -> bool {
        matches!(self, PdnKind::Bs | PdnKind::Bb)
    }

    pub fn buried_rails(self) -> bool {
        matches!(self, PdnKind::Fb | PdnKind::Bb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TapScheme {
    /// Tap columns on every two placement rows.
    Column,
    /// Taps on every four placement rows, successive row-pairs offset by
    /// half the tap pitch.
    Staggered,
}

impl TapScheme {
    pub fn id(self) -> &'static str {
        match self {
            TapScheme::Column => "column",
            TapScheme::Staggered => "staggered",
        }
    }

    pub fn from_id(s: &str) -> Option<TapScheme> {
        match s.to_ascii_lowercase().as_str() {
            "column" => Some(TapScheme::Column),
            "staggered" => Some(TapScheme::Staggered),
            _ => None,
        }
    }
}

pub const TAP_PITCHES_CPP: [u32; 5] = [24, 32, 48, 96, 128];

/// Tap cell width in CPP: 2 for the BPR bridge, 6 for the backside bridge
/// (sized by the ~90nm TSV plus its keepout ring).
pub fn tap_width_cpp(kind: PdnKind) -> u32 {
    match kind {
        PdnKind::Fb => 2,
        PdnKind::Bs => 6,
        _ => 0,
    }
}

/// One stripe-geometry row covering a contiguous layer group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripeRow {
    pub lo_layer: u8,
    pub hi_layer: u8,
    pub pitch_um: f64,
    pub width_um: f64,
    pub spacing_um: f64,
    /// Fraction of routing tracks the stripes occupy on these layers.
    pub density: f64,
}

pub fn default_stripe_table() -> Vec<StripeRow> {
    vec![
        StripeRow { lo_layer: 3, hi_layer: 3, pitch_um: 1.08, width_um: 0.012, spacing_um: 0.508, density: 0.04 },
        StripeRow { lo_layer: 4, hi_layer: 4, pitch_um: 1.152, width_um: 0.032, spacing_um: 0.544, density: 0.11 },
        StripeRow { lo_layer: 5, hi_layer: 11, pitch_um: 5.0, width_um: 1.0, spacing_um: 1.5, density: 0.20 },
        StripeRow { lo_layer: 12, hi_layer: 13, pitch_um: 4.32, width_um: 1.8, spacing_um: 0.36, density: 1.00 },
    ]
}

/// Electrical defaults. Sheet resistances are synthetic (tight-pitch layers
/// high, fat top layers low; buried rails below the M0 rail value) and fully
/// configurable. The nano-TSV resistance derives from a documented
/// resistivity constant and the stated 90nm width with 1:7 or 1:10 aspect.
#[derive(Debug, Clone, Copy)]
pub struct PdnElectrical {
    /// M0 rail resistance, ohm per um of rail length.
    pub m0_rail_ohm_per_um: f64,
    /// Buried power-rail resistance, ohm per um (below the M0 value).
    pub bpr_rail_ohm_per_um: f64,
    /// Sheet resistance per stripe layer group, ohm/sq, indexed by layer.
    pub sheet_res_m3: f64,
    pub sheet_res_m4: f64,
    pub sheet_res_mid: f64,
    pub sheet_res_top: f64,
    /// Via resistances, ohm per via.
    pub via_lo_ohm: f64,  // V0-V3
    pub via_mid_ohm: f64, // V4-V11
    pub via_top_ohm: f64, // V12
    /// TSV resistivity in ohm*um (copper-like default 0.0175).
    pub tsv_resistivity_ohm_um: f64,
    /// Pitch of direct rail-to-backside TSVs for the buried+backside option,
    /// in CPP.
    pub bb_tsv_pitch_cpp: u32,
}

impl Default for PdnElectrical {
    fn default() -> Self {
        Self {
            m0_rail_ohm_per_um: 50.0,
            bpr_rail_ohm_per_um: 10.0,
            sheet_res_m3: 20.0,
            sheet_res_m4: 10.0,
            sheet_res_mid: 2.0,
            sheet_res_top: 0.03,
            via_lo_ohm: 50.0,
            via_mid_ohm: 5.0,
            via_top_ohm: 0.06294,
            tsv_resistivity_ohm_um: 0.0175,
            bb_tsv_pitch_cpp: 24,
        }
    }
}

impl PdnElectrical {
    /// Nano-TSV resistance from resistivity * height / area with 90nm width.
    pub fn tsv_resistance_ohm(&self, aspect: f64) -> f64 {
        let w_um = 0.09;
        let h_um = w_um * aspect;
        self.tsv_resistivity_ohm_um * h_um / (w_um * w_um)
    }
}

#[derive(Debug, Clone)]
pub struct PdnConfig {
    pub kind: PdnKind,
    pub tap_pitch_cpp: Option<u32>,
    pub tap_scheme: Option<TapScheme>,
    pub stripes: Vec<StripeRow>,
    pub electrical: PdnElectrical,
}

impl PdnConfig {
    pub fn new(kind: PdnKind, tap_pitch_cpp: Option<u32>, tap_scheme: Option<TapScheme>) -> Result<Self> {
        let cfg = Self {
            kind,
            tap_pitch_cpp,
            tap_scheme,
            stripes: default_stripe_table(),
            electrical: PdnElectrical::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind.needs_taps() {
            if self.tap_pitch_cpp.is_none() || self.tap_scheme.is_none() {
                return Err(Error::PdnConfig(format!(
                    "{} requires tap_pitch and tap_scheme",
                    self.kind.id()
                )));
            }
            let pitch = self.tap_pitch_cpp.unwrap();
            if pitch < tap_width_cpp(self.kind) {
                return Err(Error::PdnConfig(format!(
                    "tap pitch {pitch} smaller than tap width {}",
                    tap_width_cpp(self.kind)
                )));
            }
        } else if self.tap_pitch_cpp.is_some() || self.tap_scheme.is_some() {
            return Err(Error::PdnConfig(format!(
                "{} does not take tap cells",
                self.kind.id()
            )));
        }
        Ok(())
    }

    /// Fraction of routing tracks occupied by PDN stripes on `layer` for
    /// this configuration. Backside configurations leave the frontside free.
    pub fn routing_derate(&self, layer: u8) -> f64 {
        if self.kind.backside() {
            return 0.0;
        }
        self.stripes
            .iter()
            .find(|r| layer >= r.lo_layer && layer <= r.hi_layer)
            .map_or(0.0, |r| r.density)
    }

    /// Parses the keyed text format:
    /// `pdn kind=P_BS tap_pitch=48 tap_scheme=Staggered` plus optional
    /// `stripe lo=5 hi=11 pitch=5.0 width=1.0 spacing=1.5 density=0.2`
    /// override lines.
    pub fn parse(text: &str) -> Result<PdnConfig> {
        let mut kind = None;
        let mut tap_pitch = None;
        let mut tap_scheme = None;
        let mut stripes = default_stripe_table();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let kvs: Vec<(&str, &str)> = rest
                .split_whitespace()
                .filter_map(|t| t.split_once('='))
                .collect();
            match word {
                "pdn" => {
                    for (k, v) in &kvs {
                        match *k {
                            "kind" => {
                                kind = Some(PdnKind::from_id(v).ok_or(Error::Parse {
                                    line: lineno,
                                    msg: format!("unknown pdn kind `{v}`"),
                                })?)
                            }
                            "tap_pitch" => {
                                tap_pitch = Some(v.parse().map_err(|_| Error::Parse {
                                    line: lineno,
                                    msg: format!("bad tap_pitch `{v}`"),
                                })?)
                            }
                            "tap_scheme" => {
                                tap_scheme = Some(TapScheme::from_id(v).ok_or(Error::Parse {
                                    line: lineno,
                                    msg: format!("unknown tap_scheme `{v}`"),
                                })?)
                            }
                            _ => {
                                return Err(Error::Parse {
                                    line: lineno,
                                    msg: format!("unknown pdn key `{k}`"),
                                })
                            }
                        }
                    }
                }
                "stripe" => {
                    let mut row = StripeRow {
                        lo_layer: 0,
                        hi_layer: 0,
                        pitch_um: 0.0,
                        width_um: 0.0,
                        spacing_um: 0.0,
                        density: 0.0,
                    };
                    for (k, v) in &kvs {
                        let f: f64 = v.parse().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad number `{v}`"),
                        })?;
                        match *k {
                            "lo" => row.lo_layer = f as u8,
                            "hi" => row.hi_layer = f as u8,
                            "pitch" => row.pitch_um = f,
                            "width" => row.width_um = f,
                            "spacing" => row.spacing_um = f,
                            "density" => row.density = f,
                            _ => {
                                return Err(Error::Parse {
                                    line: lineno,
                                    msg: format!("unknown stripe key `{k}`"),
                                })
                            }
                        }
                    }
                    stripes.retain(|r| !(r.lo_layer == row.lo_layer && r.hi_layer == row.hi_layer));
                    stripes.push(row);
                }
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unknown directive `{word}`"),
                    })
                }
            }
        }
        let kind = kind.ok_or(Error::PdnConfig("missing pdn kind".into()))?;
        stripes.sort_by_key(|r| r.lo_layer);
        let cfg = PdnConfig {
            kind,
            tap_pitch_cpp: tap_pitch,
            tap_scheme,
            stripes,
            electrical: PdnElectrical::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
