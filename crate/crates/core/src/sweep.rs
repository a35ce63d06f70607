//! Named probe states and the per-`p` table of measures for plotting.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{embed_local, pauli, Subsystem};
use crate::measures::{entropic_discord, lqu, qfi, qip, SpectrumSpec};
use crate::states::{self, purity, DensityMatrix};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Bell-diagonal discordant probe, parameter `p`.
    RhoQ,
    /// Classically correlated probe with the same purity, parameter `p`.
    RhoC,
    /// `|Φ+>`; ignores `p`.
    Bell,
    /// `1/4`; ignores `p`.
    MaximallyMixed,
    /// Classical-quantum state with zero discord from A and nonzero from B; ignores `p`.
    CqExample,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::RhoQ,
        Preset::RhoC,
        Preset::Bell,
        Preset::MaximallyMixed,
        Preset::CqExample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::RhoQ => "rho_q",
            Preset::RhoC => "rho_c",
            Preset::Bell => "bell",
            Preset::MaximallyMixed => "maximally_mixed",
            Preset::CqExample => "cq_example",
        }
    }

    pub fn uses_p(self) -> bool {
        matches!(self, Preset::RhoQ | Preset::RhoC)
    }

    pub fn state(self, p: f64) -> Result<DensityMatrix> {
        match self {
            Preset::RhoQ => states::make_rho_q(p),
            Preset::RhoC => states::make_rho_c(p),
            Preset::Bell => Ok(states::bell_phi_plus()),
            Preset::MaximallyMixed => Ok(DensityMatrix::maximally_mixed((2, 2))),
            Preset::CqExample => Ok(states::cq_example()),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown preset `{s}`")))
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "p",
    "qfi_x",
    "qfi_y",
    "qfi_z",
    "qfi_diag",
    "qip_raw",
    "qip_normalized",
    "lqu",
    "discord_entropic",
    "purity",
];

/// Measures of one probe at one `p`; QFI columns use generators on A.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub qfi_x: f64,
    pub qfi_y: f64,
    pub qfi_z: f64,
    /// Generator `(σx + σy)/√2`.
    pub qfi_diag: f64,
    pub qip_raw: f64,
    pub qip_normalized: f64,
    pub lqu: f64,
    pub discord_entropic: f64,
    pub purity: f64,
}

impl SweepRow {
    pub fn values(&self) -> [f64; 10] {
        [
            self.p,
            self.qfi_x,
            self.qfi_y,
            self.qfi_z,
            self.qfi_diag,
            self.qip_raw,
            self.qip_normalized,
            self.lqu,
            self.discord_entropic,
            self.purity,
        ]
    }

    pub fn from_values(v: [f64; 10]) -> Self {
        Self {
            p: v[0],
            qfi_x: v[1],
            qfi_y: v[2],
            qfi_z: v[3],
            qfi_diag: v[4],
            qip_raw: v[5],
            qip_normalized: v[6],
            lqu: v[7],
            discord_entropic: v[8],
            purity: v[9],
        }
    }
}

pub fn sweep_row(preset: Preset, p: f64) -> Result<SweepRow> {
    let rho = preset.state(p)?;
    let dims = rho.dims();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let gen = |n: [f64; 3]| embed_local(&pauli::along(n), Subsystem::A, dims);
    let spectrum = SpectrumSpec::qubit();
    let qip = qip(&rho, Subsystem::A, &spectrum)?;
    Ok(SweepRow {
        p,
        qfi_x: qfi(&rho, &gen([1.0, 0.0, 0.0])?)?,
        qfi_y: qfi(&rho, &gen([0.0, 1.0, 0.0])?)?,
        qfi_z: qfi(&rho, &gen([0.0, 0.0, 1.0])?)?,
        qfi_diag: qfi(&rho, &gen([s, s, 0.0])?)?,
        qip_raw: qip.raw.value,
        qip_normalized: qip.normalized,
        lqu: lqu(&rho, Subsystem::A, &spectrum)?.value,
        discord_entropic: entropic_discord(&rho, Subsystem::A)?.value,
        purity: purity(&rho),
    })
}

/// `n` evenly spaced points from 0 to 1 inclusive.
pub fn default_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

/// Rows in the order of `ps`.
pub fn sweep(preset: Preset, ps: &[f64]) -> Result<Vec<SweepRow>> {
    ps.par_iter().map(|&p| sweep_row(preset, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_roundtrip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("rho_x".parse::<Preset>().is_err());
    }

    #[test]
    fn rho_q_row_at_half() {
        let r = sweep_row(Preset::RhoQ, 0.5).unwrap();
        assert!((r.qfi_x - 0.25).abs() < 1e-12);
        assert!((r.qfi_y - 0.4).abs() < 1e-12);
        assert!((r.qfi_z - 0.25).abs() < 1e-12);
        assert!((r.qfi_diag - 0.325).abs() < 1e-12);
        for q in [r.qfi_x, r.qfi_y, r.qfi_z, r.qfi_diag] {
            assert!(r.qip_raw <= q + 1e-9);
        }
    }

    #[test]
    fn rho_c_row_at_half() {
        let r = sweep_row(Preset::RhoC, 0.5).unwrap();
        assert!(r.qfi_x.abs() < 1e-12);
        assert!((r.qfi_y - 0.4).abs() < 1e-12);
        assert!((r.qfi_z - 0.4).abs() < 1e-12);
        assert!((r.qfi_diag - 0.2).abs() < 1e-12);
        assert!(r.qip_raw <= 1e-12 && r.lqu <= 1e-12);
    }

    #[test]
    fn zero_row_is_maximally_mixed() {
        for preset in [Preset::RhoQ, Preset::RhoC] {
            let r = sweep_row(preset, 0.0).unwrap();
            let v = r.values();
            assert!(v[1..9].iter().all(|x| x.abs() < 1e-12), "{v:?}");
            assert!((r.purity - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn grid_and_order() {
        let g = default_grid(101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert!((g[37] - 0.37).abs() < 1e-15);
        let rows = sweep(Preset::RhoQ, &[0.9, 0.1, 0.5]).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.p).collect::<Vec<_>>(),
            vec![0.9, 0.1, 0.5]
        );
        assert!(sweep(Preset::RhoQ, &[1.5]).is_err());
    }
}
