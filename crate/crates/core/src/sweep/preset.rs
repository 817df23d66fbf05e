//! Figure presets.
//!
//! Constants the figures do not pin down (the amplitude and wave frequency of
//! the heatmaps, the gap values per curve, the separation per panel) are
//! preset choices. Every preset lists them in `assumptions`, which end up as
//! comments in the emitted SVG.

use super::{run_grid, Axis, GridRow, GridSpec, SweepError};
use crate::closedform::HarvestReport;
use crate::model::{DimensionlessParams, ParamKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetId {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig4a,
    Fig4b,
    Fig4c,
}

impl PresetId {
    pub const ALL: [PresetId; 10] = [
        PresetId::Fig1a,
        PresetId::Fig1b,
        PresetId::Fig1c,
        PresetId::Fig2,
        PresetId::Fig3,
        PresetId::Fig4,
        PresetId::Fig5,
        PresetId::Fig4a,
        PresetId::Fig4b,
        PresetId::Fig4c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetId::Fig1a => "fig1a",
            PresetId::Fig1b => "fig1b",
            PresetId::Fig1c => "fig1c",
            PresetId::Fig2 => "fig2",
            PresetId::Fig3 => "fig3",
            PresetId::Fig4 => "fig4",
            PresetId::Fig5 => "fig5",
            PresetId::Fig4a => "fig4a",
            PresetId::Fig4b => "fig4b",
            PresetId::Fig4c => "fig4c",
        }
    }

    pub fn from_name(name: &str) -> Result<PresetId, SweepError> {
        PresetId::ALL.into_iter().find(|p| p.name() == name).ok_or_else(|| SweepError::UnknownPreset(name.to_string()))
    }
}

impl std::fmt::Display for PresetId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Column a figure plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputQuantity {
    Concurrence,
    Corr,
    ThetaGw,
    PsiGw,
}

impl OutputQuantity {
    pub fn column(self) -> &'static str {
        match self {
            OutputQuantity::Concurrence => "concurrence",
            OutputQuantity::Corr => "corr",
            OutputQuantity::ThetaGw => "theta_gw",
            OutputQuantity::PsiGw => "psi_gw",
        }
    }

    /// Axis label in normalized units.
    pub fn label(self) -> &'static str {
        match self {
            OutputQuantity::Concurrence => "C(ρ_AB)/λ²",
            OutputQuantity::Corr => "corr/λ²",
            OutputQuantity::ThetaGw => "Θ_GW/(Aλ²)",
            OutputQuantity::PsiGw => "Ψ_GW/(Aλ²)",
        }
    }

    pub fn value(self, r: &HarvestReport) -> Option<f64> {
        match self {
            OutputQuantity::Concurrence => Some(r.concurrence),
            OutputQuantity::Corr => Some(r.corr),
            OutputQuantity::ThetaGw => r.theta_gw,
            OutputQuantity::PsiGw => Some(r.psi_gw),
        }
    }
}

/// A figure: a grid, optionally repeated over panels, and the plotted column.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: PresetId,
    pub grid: GridSpec,
    /// One sub-grid per value, in order; `None` for a single panel.
    pub panels: Option<(ParamKey, Vec<f64>)>,
    pub output_quantity: OutputQuantity,
    pub assumptions: Vec<String>,
}

pub const HEATMAP_POINTS: usize = 61;
pub const LINE_POINTS: usize = 101;
pub const HEATMAP_AMPLITUDE: f64 = 0.05;
pub const HEATMAP_OMEGA: f64 = 2.0;
pub const CURVE_GAPS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
pub const PANEL_SEPARATIONS: [f64; 2] = [0.5, 2.0];

impl FigurePreset {
    pub fn new(id: PresetId) -> FigurePreset {
        use PresetId::*;
        let heatmap = |a: f64, t0: f64, q: OutputQuantity| {
            let gap = Axis::new(ParamKey::GapOmegaSigma, -1.99, 1.99, HEATMAP_POINTS).expect("valid preset axis");
            let d = Axis::new(ParamKey::DSigma, 0.1, 5.0, HEATMAP_POINTS).expect("valid preset axis");
            let fixed = DimensionlessParams::new(a, HEATMAP_OMEGA, 1.0, 1.0, t0);
            let mut assumptions = vec![
                format!("omega_sigma = {HEATMAP_OMEGA} (preset choice)"),
                "Omega_sigma in [-1.99, 1.99], D_sigma in [0.1, 5] (preset ranges)".to_string(),
            ];
            if a > 0.0 {
                assumptions.push(format!("A = {a} (preset choice)"));
            }
            FigurePreset {
                id,
                grid: GridSpec::new(gap, Some(d), fixed).expect("distinct axes"),
                panels: None,
                output_quantity: q,
                assumptions,
            }
        };
        let lines = |t0: f64, q: OutputQuantity| {
            let w = Axis::new(ParamKey::OmegaSigma, 0.2, 8.0, LINE_POINTS).expect("valid preset axis");
            let gaps = Axis::new(ParamKey::GapOmegaSigma, CURVE_GAPS[0], CURVE_GAPS[3], CURVE_GAPS.len())
                .expect("valid preset axis");
            let fixed = DimensionlessParams::new(HEATMAP_AMPLITUDE, 2.0, 1.0, 1.0, t0);
            FigurePreset {
                id,
                grid: GridSpec::new(w, Some(gaps), fixed).expect("distinct axes"),
                panels: Some((ParamKey::DSigma, PANEL_SEPARATIONS.to_vec())),
                output_quantity: q,
                assumptions: vec![
                    format!("one curve per Omega_sigma in {CURVE_GAPS:?} (preset choice)"),
                    format!("one panel per D_sigma in {PANEL_SEPARATIONS:?}: timelike, spacelike (preset choice)"),
                    format!("A = {HEATMAP_AMPLITUDE} enters only the concurrence and corr columns"),
                ],
            }
        };
        match id {
            Fig1a => heatmap(0.0, 0.0, OutputQuantity::Concurrence),
            Fig1b => heatmap(HEATMAP_AMPLITUDE, 0.0, OutputQuantity::Concurrence),
            Fig1c => heatmap(HEATMAP_AMPLITUDE, 1.0, OutputQuantity::Concurrence),
            Fig4a => heatmap(0.0, 0.0, OutputQuantity::Corr),
            Fig4b => heatmap(HEATMAP_AMPLITUDE, 0.0, OutputQuantity::Corr),
            Fig4c => heatmap(HEATMAP_AMPLITUDE, 1.0, OutputQuantity::Corr),
            Fig2 => lines(0.0, OutputQuantity::ThetaGw),
            Fig3 => lines(1.0, OutputQuantity::ThetaGw),
            Fig4 => lines(0.0, OutputQuantity::PsiGw),
            Fig5 => lines(1.0, OutputQuantity::PsiGw),
        }
    }

    /// Heatmap presets sweep (Omega, D); line presets plot curves against omega.
    pub fn is_heatmap(&self) -> bool {
        self.panels.is_none() && self.grid.axis2.is_some()
    }

    /// Replaces fixed parameters; swept and panel keys are left alone.
    pub fn with_fixed(mut self, key: ParamKey, value: f64) -> FigurePreset {
        let swept = key == self.grid.axis1.key
            || self.grid.axis2.is_some_and(|a| a.key == key)
            || self.panels.as_ref().is_some_and(|(k, _)| *k == key);
        if !swept {
            self.grid.fixed.set(key, value);
            self.assumptions.push(format!("{key} = {value} (override)"));
        }
        self
    }

    /// One grid per panel.
    pub fn grids(&self) -> Vec<GridSpec> {
        match &self.panels {
            None => vec![self.grid.clone()],
            Some((key, values)) => {
                values.iter().map(|&v| GridSpec { fixed: self.grid.fixed.with(*key, v), ..self.grid.clone() }).collect()
            }
        }
    }

    pub fn expected_rows(&self) -> usize {
        self.grid.len() * self.panels.as_ref().map_or(1, |(_, v)| v.len())
    }

    /// Rows of every panel, panel by panel.
    pub fn run(&self) -> Vec<GridRow> {
        self.grids().iter().flat_map(run_grid).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in PresetId::ALL {
            assert_eq!(PresetId::from_name(id.name()).unwrap(), id);
        }
        assert!(matches!(PresetId::from_name("fig9"), Err(SweepError::UnknownPreset(_))));
    }

    #[test]
    fn preset_shapes() {
        let f1 = FigurePreset::new(PresetId::Fig1a);
        assert!(f1.is_heatmap());
        assert_eq!(f1.expected_rows(), 61 * 61);
        assert_eq!(f1.grid.fixed.gw.amplitude_a, 0.0);
        let f2 = FigurePreset::new(PresetId::Fig2);
        assert!(!f2.is_heatmap());
        assert_eq!(f2.expected_rows(), 101 * 4 * 2);
        assert_eq!(f2.grid.axis2.unwrap().values(), CURVE_GAPS.to_vec());
        assert_eq!(FigurePreset::new(PresetId::Fig3).grid.fixed.detector.t0_sigma, 1.0);
        assert_eq!(FigurePreset::new(PresetId::Fig5).output_quantity, OutputQuantity::PsiGw);
    }

    #[test]
    fn overrides_skip_swept_keys() {
        let p = FigurePreset::new(PresetId::Fig2).with_fixed(ParamKey::DSigma, 9.0).with_fixed(ParamKey::A, 0.01);
        assert_eq!(p.grids()[1].fixed.pair.d_sigma, 2.0);
        assert_eq!(p.grid.fixed.gw.amplitude_a, 0.01);
    }

    #[test]
    fn fig2_resonance_near_twice_the_gap() {
        let mut p = FigurePreset::new(PresetId::Fig2);
        p.panels = Some((ParamKey::DSigma, vec![2.0]));
        let rows = p.run();
        let (w, _) = rows
            .iter()
            .filter(|r| r.params.detector.gap_omega_sigma == 1.0)
            .map(|r| (r.params.gw.omega_sigma, r.report().unwrap().theta_gw.unwrap()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!((1.7..=2.3).contains(&w), "minimum at {w}");
    }
}
