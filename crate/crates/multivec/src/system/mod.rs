//! Typed problem-instance data model with unit discipline and validation.
//!
//! Canonical units everywhere: MWh, tonne, MW, tonne-per-hour, EUR, hour.
//! Paper-sourced tables in other unit systems are converted at ingestion.

mod load;

pub use load::load_system;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::fuels::SynfuelTechnology;

pub const HOURS_PER_YEAR: usize = 8760;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Zone {
    pub id: String,
    pub name: String,
    /// Annual geologic injection limit, tonnes CO2 per year. Zero disables
    /// sequestration in this zone.
    pub co2_injection_limit_t: f64,
}

/// One representative period: `hours` consecutive steps, each counted
/// `weight` times toward the year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Period {
    pub hours: usize,
    pub weight: f64,
}

/// Ordered representative periods covering the year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub periods: Vec<Period>,
}

impl TimeGrid {
    /// A single chronological period spanning the whole horizon.
    pub fn full_year(hours: usize) -> TimeGrid {
        TimeGrid {
            periods: vec![Period {
                hours,
                weight: 1.0,
            }],
        }
    }

    pub fn num_steps(&self) -> usize {
        self.periods.iter().map(|p| p.hours).sum()
    }

    /// Sum of step weights, which must equal the hours in a year.
    pub fn weighted_hours(&self) -> f64 {
        self.periods
            .iter()
            .map(|p| p.weight * p.hours as f64)
            .sum()
    }

    /// Weight of a global step index.
    pub fn weight(&self, t: usize) -> f64 {
        let mut acc = 0;
        for p in &self.periods {
            acc += p.hours;
            if t < acc {
                return p.weight;
            }
        }
        panic!("step {t} out of range");
    }

    /// (start, length, weight) of every period.
    pub fn period_slices(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.periods.len());
        let mut start = 0;
        for p in &self.periods {
            out.push((start, p.hours, p.weight));
            start += p.hours;
        }
        out
    }

    /// Step weights as a flat vector.
    pub fn step_weights(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.num_steps());
        for p in &self.periods {
            w.extend(std::iter::repeat(p.weight).take(p.hours));
        }
        w
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThermalGenerator {
    pub id: String,
    pub zone: String,
    pub class: String,
    pub fuel: String,
    pub capex_eur_per_mw: f64,
    pub fom_eur_per_mw_y: f64,
    pub vom_eur_per_mwh: f64,
    pub heat_rate_mwh_per_mwh: f64,
    pub capture_rate: f64,
    pub lifetime_y: f64,
    pub existing_mw: f64,
    pub max_mw: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VreGenerator {
    pub id: String,
    pub zone: String,
    pub class: String,
    pub capex_eur_per_mw: f64,
    pub fom_eur_per_mw_y: f64,
    pub existing_mw: f64,
    pub max_mw: f64,
    pub lifetime_y: f64,
    /// Capacity factor per step, same length as the time grid.
    #[serde(skip)]
    pub profile: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElectricStorage {
    pub id: String,
    pub zone: String,
    pub power_capex_eur_per_mw: f64,
    pub energy_capex_eur_per_mwh: f64,
    pub fom_eur_per_mw_y: f64,
    pub round_trip_efficiency: f64,
    pub lifetime_y: f64,
    pub max_power_mw: f64,
    pub max_energy_mwh: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransmissionLine {
    pub id: String,
    pub zone_from: String,
    pub zone_to: String,
    pub existing_mw: f64,
    /// Total buildable capacity is existing × multiple when brownfield.
    pub expansion_limit_multiple: f64,
    /// Cap for lines built where none exists.
    pub new_line_cap_mw: f64,
    pub capex_eur_per_mw: f64,
    pub lifetime_y: f64,
}

impl TransmissionLine {
    /// Maximum total capacity under the expansion rule.
    pub fn max_total_mw(&self) -> f64 {
        if self.existing_mw > 0.0 {
            self.existing_mw * self.expansion_limit_multiple
        } else {
            self.new_line_cap_mw
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct H2Technology {
    pub id: String,
    pub zone: String,
    pub class: String,
    pub capex_eur_per_tph: f64,
    pub fom_eur_per_tph_y: f64,
    pub vom_eur_per_t: f64,
    pub electricity_mwh_per_t: f64,
    pub gas_mwh_per_t: f64,
    pub capture_rate: f64,
    pub lifetime_y: f64,
    pub max_tph: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct H2Storage {
    pub id: String,
    pub zone: String,
    pub charge_capex_eur_per_tph: f64,
    pub energy_capex_eur_per_t: f64,
    pub fom_eur_per_t_y: f64,
    pub round_trip_efficiency: f64,
    pub lifetime_y: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Pipeline {
    pub id: String,
    pub zone_from: String,
    pub zone_to: String,
    /// EUR per unit of flow capacity (t/h); distance scaling is applied by
    /// whoever prepares the file.
    pub capex_eur_per_tph: f64,
    pub fom_eur_per_tph_y: f64,
    pub lifetime_y: f64,
    pub max_tph: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DacTechnology {
    pub id: String,
    pub zone: String,
    pub class: String,
    pub capex_eur_per_tph: f64,
    pub fom_eur_per_tph_y: f64,
    pub vom_eur_per_t: f64,
    pub gas_mwh_per_t: f64,
    /// Net electricity use per tonne captured; a negative value is a net
    /// export credit to the power balance.
    pub electricity_mwh_per_t: f64,
    pub combustion_capture_rate: f64,
    pub lifetime_y: f64,
    pub max_tph: f64,
}

/// Hydrogen-fired power generation (G2P).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct G2pTechnology {
    pub id: String,
    pub zone: String,
    pub capex_eur_per_mw: f64,
    pub fom_eur_per_mw_y: f64,
    pub vom_eur_per_mwh: f64,
    /// Electric output per tonne of hydrogen burned.
    pub conversion_mwh_per_t: f64,
    pub lifetime_y: f64,
    pub max_mw: f64,
}

/// Cost model for geologic injection, applied wherever a zone has capacity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Co2StorageSpec {
    pub capex_eur_per_t_y: f64,
    pub fom_eur_per_t_y: f64,
    pub electricity_mwh_per_t: f64,
    pub lifetime_y: f64,
}

impl Default for Co2StorageSpec {
    fn default() -> Self {
        Co2StorageSpec {
            capex_eur_per_t_y: 0.0,
            fom_eur_per_t_y: 0.0,
            electricity_mwh_per_t: 0.0,
            lifetime_y: 30.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FuelRole {
    /// Priced commodity burned by thermal units, reformers and DAC.
    Combustion,
    /// Demanded liquid fuel with a supply balance and conventional purchase.
    Liquid,
    /// Synfuel co-product: credited at market value, no demand balance.
    Byproduct,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuelSpec {
    pub name: String,
    pub role: FuelRole,
    pub price_eur_per_mwh: f64,
    /// Combustion emissions, tonnes CO2 per MWh of fuel.
    pub co2_t_per_mwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mandate {
    pub fuel: String,
    pub zeta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolicyConfig {
    /// Joint annual cap over power, H2 and transport, tonnes CO2.
    pub emissions_cap_t: f64,
    /// At most one mandate is allowed; kept as a list so validation can
    /// report violations instead of silently dropping entries.
    pub mandates: Vec<Mandate>,
    pub co2_storage_enabled: bool,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            emissions_cap_t: f64::INFINITY,
            mandates: Vec::new(),
            co2_storage_enabled: true,
        }
    }
}

/// The full problem instance.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct EnergySystem {
    pub zones: Vec<Zone>,
    pub grid: TimeGrid,
    pub thermal: Vec<ThermalGenerator>,
    pub vre: Vec<VreGenerator>,
    pub storage: Vec<ElectricStorage>,
    pub lines: Vec<TransmissionLine>,
    pub h2_techs: Vec<H2Technology>,
    pub h2_storage: Vec<H2Storage>,
    pub h2_pipes: Vec<Pipeline>,
    pub co2_pipes: Vec<Pipeline>,
    pub dac: Vec<DacTechnology>,
    pub g2p: Vec<G2pTechnology>,
    pub co2_storage: Co2StorageSpec,
    pub synfuel: Vec<SynfuelTechnology>,
    pub fuels: Vec<FuelSpec>,
    /// Exogenous electricity demand per zone, MWh per step.
    pub demand_elec_mwh: BTreeMap<String, Vec<f64>>,
    /// Exogenous hydrogen demand per zone, tonnes per step.
    pub demand_h2_t: BTreeMap<String, Vec<f64>>,
    /// Liquid-fuel demand per (fuel, zone), MWh per step.
    pub demand_fuels_mwh: BTreeMap<String, BTreeMap<String, Vec<f64>>>,
    pub policy: PolicyConfig,
    pub discount_rate: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid::full_year(HOURS_PER_YEAR)
    }
}

impl EnergySystem {
    pub fn zone_ids(&self) -> Vec<&str> {
        self.zones.iter().map(|z| z.id.as_str()).collect()
    }

    pub fn fuel(&self, name: &str) -> Option<&FuelSpec> {
        self.fuels.iter().find(|f| f.name == name)
    }

    /// Fuels demanded as liquids, in declaration order.
    pub fn liquid_fuels(&self) -> Vec<&FuelSpec> {
        self.fuels
            .iter()
            .filter(|f| f.role == FuelRole::Liquid)
            .collect()
    }

    pub fn byproduct_fuels(&self) -> Vec<&FuelSpec> {
        self.fuels
            .iter()
            .filter(|f| f.role == FuelRole::Byproduct)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

/// Result of [`validate`]: empty means well-formed.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, code: &'static str, message: String) {
        self.violations.push(Violation { code, message });
    }

    /// Convert to an error when any violation is present.
    pub fn into_result(self) -> crate::Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(crate::Error::InvalidSystem(
                self.violations.len(),
                format!("[{}] {}", self.violations[0].code, self.violations[0].message),
            ))
        }
    }
}

/// Check every structural invariant of the instance. Pure and idempotent;
/// returns a report rather than failing on the first problem.
pub fn validate(system: &EnergySystem) -> ValidationReport {
    let mut report = ValidationReport::default();
    let steps = system.grid.num_steps();

    let mut zone_ids = HashSet::new();
    for z in &system.zones {
        if !zone_ids.insert(z.id.as_str()) {
            report.push("zone.duplicate", format!("duplicate zone id '{}'", z.id));
        }
        if !(z.co2_injection_limit_t >= 0.0) {
            report.push(
                "zone.injection_limit",
                format!("zone '{}': negative CO2 injection limit", z.id),
            );
        }
    }
    let zone_exists = |id: &str| zone_ids.contains(id);

    let wh = system.grid.weighted_hours();
    if (wh - HOURS_PER_YEAR as f64).abs() > 1e-6 * HOURS_PER_YEAR as f64 {
        report.push(
            "grid.weighted_hours",
            format!("time grid covers {wh} weighted hours, expected {HOURS_PER_YEAR}"),
        );
    }
    for (i, p) in system.grid.periods.iter().enumerate() {
        if !(p.weight > 0.0) {
            report.push(
                "grid.weight",
                format!("period {i}: non-positive weight {}", p.weight),
            );
        }
    }

    let mut check_zone = |report: &mut ValidationReport, kind: &str, id: &str, zone: &str| {
        if !zone_exists(zone) {
            report.push(
                "zone.dangling",
                format!("{kind} '{id}' references unknown zone '{zone}'"),
            );
        }
    };

    let mut fuel_names = HashSet::new();
    for f in &system.fuels {
        if !fuel_names.insert(f.name.as_str()) {
            report.push("fuel.duplicate", format!("duplicate fuel '{}'", f.name));
        }
        if !(f.price_eur_per_mwh >= 0.0) {
            report.push("fuel.price", format!("fuel '{}': negative price", f.name));
        }
        if !(f.co2_t_per_mwh >= 0.0) {
            report.push(
                "fuel.intensity",
                format!("fuel '{}': negative carbon intensity", f.name),
            );
        }
    }

    for g in &system.thermal {
        check_zone(&mut report, "thermal", &g.id, &g.zone);
        if !(0.0..=1.0).contains(&g.capture_rate) {
            report.push(
                "thermal.capture_rate",
                format!("thermal '{}': capture rate {} outside [0,1]", g.id, g.capture_rate),
            );
        }
        if g.existing_mw > g.max_mw {
            report.push(
                "thermal.capacity",
                format!("thermal '{}': existing capacity exceeds maximum", g.id),
            );
        }
        if !(g.heat_rate_mwh_per_mwh > 0.0) {
            report.push(
                "thermal.heat_rate",
                format!("thermal '{}': heat rate must be positive", g.id),
            );
        }
        if system.fuel(&g.fuel).is_none() {
            report.push(
                "thermal.fuel",
                format!("thermal '{}' references unknown fuel '{}'", g.id, g.fuel),
            );
        }
    }

    for v in &system.vre {
        check_zone(&mut report, "vre", &v.id, &v.zone);
        if v.profile.len() != steps {
            report.push(
                "vre.profile_length",
                format!(
                    "vre '{}': profile has {} steps, grid has {steps}",
                    v.id,
                    v.profile.len()
                ),
            );
        }
        if v.profile.iter().any(|cf| !(-1e-9..=1.0 + 1e-9).contains(cf)) {
            report.push(
                "vre.profile_range",
                format!("vre '{}': capacity factor outside [0,1]", v.id),
            );
        }
        if v.existing_mw > v.max_mw {
            report.push(
                "vre.capacity",
                format!("vre '{}': existing capacity exceeds maximum", v.id),
            );
        }
    }

    for s in &system.storage {
        check_zone(&mut report, "storage", &s.id, &s.zone);
        if !(s.round_trip_efficiency > 0.0 && s.round_trip_efficiency <= 1.0) {
            report.push(
                "storage.round_trip",
                format!(
                    "storage '{}': round-trip efficiency {} outside (0,1]",
                    s.id, s.round_trip_efficiency
                ),
            );
        }
    }

    for l in &system.lines {
        check_zone(&mut report, "line", &l.id, &l.zone_from);
        check_zone(&mut report, "line", &l.id, &l.zone_to);
        if l.zone_from == l.zone_to {
            report.push(
                "line.self_loop",
                format!("line '{}' connects a zone to itself", l.id),
            );
        }
    }

    for h in &system.h2_techs {
        check_zone(&mut report, "h2_tech", &h.id, &h.zone);
        if !(0.0..=1.0).contains(&h.capture_rate) {
            report.push(
                "h2.capture_rate",
                format!("h2 tech '{}': capture rate outside [0,1]", h.id),
            );
        }
        if h.electricity_mwh_per_t < 0.0 || h.gas_mwh_per_t < 0.0 {
            report.push(
                "h2.inputs",
                format!("h2 tech '{}': negative energy input", h.id),
            );
        }
    }
    for s in &system.h2_storage {
        check_zone(&mut report, "h2_storage", &s.id, &s.zone);
        if !(s.round_trip_efficiency > 0.0 && s.round_trip_efficiency <= 1.0) {
            report.push(
                "h2_storage.round_trip",
                format!("h2 storage '{}': round-trip efficiency outside (0,1]", s.id),
            );
        }
    }
    for p in system.h2_pipes.iter().chain(&system.co2_pipes) {
        check_zone(&mut report, "pipeline", &p.id, &p.zone_from);
        check_zone(&mut report, "pipeline", &p.id, &p.zone_to);
        if p.zone_from == p.zone_to {
            report.push(
                "pipeline.self_loop",
                format!("pipeline '{}' connects a zone to itself", p.id),
            );
        }
    }

    for d in &system.dac {
        check_zone(&mut report, "dac", &d.id, &d.zone);
        if !(0.0..=1.0).contains(&d.combustion_capture_rate) {
            report.push(
                "dac.combustion_capture",
                format!("dac '{}': combustion capture rate outside [0,1]", d.id),
            );
        }
    }
    for g in &system.g2p {
        check_zone(&mut report, "g2p", &g.id, &g.zone);
        if !(g.conversion_mwh_per_t > 0.0) {
            report.push(
                "g2p.conversion",
                format!("g2p '{}': conversion must be positive", g.id),
            );
        }
    }

    for t in &system.synfuel {
        check_zone(&mut report, "synfuel", &t.id, &t.zone);
        crate::fuels::validate_synfuel(t, system, &mut report.violations);
    }

    if system.policy.mandates.len() > 1 {
        report.push(
            "policy.mandate_count",
            format!(
                "{} synfuel mandates given; only one synthetic fuel product percentage may be set",
                system.policy.mandates.len()
            ),
        );
    }
    for m in &system.policy.mandates {
        if !(0.0..=1.0).contains(&m.zeta) {
            report.push(
                "policy.mandate_share",
                format!("mandate on '{}': share {} outside [0,1]", m.fuel, m.zeta),
            );
        }
        match system.fuel(&m.fuel) {
            None => report.push(
                "policy.mandate_fuel",
                format!("mandate references unknown fuel '{}'", m.fuel),
            ),
            Some(f) if f.role != FuelRole::Liquid => report.push(
                "policy.mandate_fuel",
                format!("mandate fuel '{}' is not a demanded liquid", m.fuel),
            ),
            _ => {}
        }
    }
    if !(system.policy.emissions_cap_t >= 0.0) {
        report.push("policy.cap", "negative emissions cap".to_string());
    }
    if !(0.0..1.0).contains(&system.discount_rate) {
        report.push(
            "policy.discount_rate",
            format!("discount rate {} outside [0,1)", system.discount_rate),
        );
    }

    let mut check_series =
        |report: &mut ValidationReport, what: &str, zone: &str, len: usize| {
            if !zone_exists(zone) {
                report.push(
                    "zone.dangling",
                    format!("{what} demand references unknown zone '{zone}'"),
                );
            }
            if len != steps {
                report.push(
                    "demand.length",
                    format!("{what} demand for '{zone}' has {len} steps, grid has {steps}"),
                );
            }
        };
    for (zone, series) in &system.demand_elec_mwh {
        check_series(&mut report, "electricity", zone, series.len());
    }
    for (zone, series) in &system.demand_h2_t {
        check_series(&mut report, "hydrogen", zone, series.len());
    }
    for (fuel, by_zone) in &system.demand_fuels_mwh {
        match system.fuel(fuel) {
            None => report.push(
                "demand.fuel",
                format!("fuel demand references unknown fuel '{fuel}'"),
            ),
            Some(f) if f.role != FuelRole::Liquid => report.push(
                "demand.fuel",
                format!("fuel demand on '{fuel}', which is not a demanded liquid"),
            ),
            _ => {}
        }
        for (zone, series) in by_zone {
            check_series(&mut report, fuel, zone, series.len());
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_zone_toy() -> EnergySystem {
        let mut sys = EnergySystem {
            zones: vec![
                Zone {
                    id: "north".into(),
                    name: "North".into(),
                    co2_injection_limit_t: 1e6,
                },
                Zone {
                    id: "south".into(),
                    name: "South".into(),
                    co2_injection_limit_t: 0.0,
                },
            ],
            grid: TimeGrid {
                periods: vec![Period {
                    hours: 12,
                    weight: 730.0,
                }],
            },
            discount_rate: 0.045,
            ..Default::default()
        };
        sys.fuels.push(FuelSpec {
            name: "ng".into(),
            role: FuelRole::Combustion,
            price_eur_per_mwh: 30.8,
            co2_t_per_mwh: 0.202,
        });
        sys.vre.push(VreGenerator {
            id: "wind_n".into(),
            zone: "north".into(),
            class: "wind".into(),
            capex_eur_per_mw: 851_000.0,
            fom_eur_per_mw_y: 32_000.0,
            existing_mw: 0.0,
            max_mw: 1e5,
            lifetime_y: 30.0,
            profile: vec![0.5; 12],
        });
        sys
    }

    #[test]
    fn well_formed_toy_validates_clean() {
        let report = validate(&two_zone_toy());
        assert!(report.is_ok(), "unexpected violations: {:?}", report.violations);
    }

    #[test]
    fn validate_is_idempotent() {
        let sys = two_zone_toy();
        let a = validate(&sys);
        let b = validate(&sys);
        assert_eq!(a.violations, b.violations);
    }

    #[test]
    fn profile_length_mismatch_is_reported() {
        let mut sys = two_zone_toy();
        sys.vre[0].profile = vec![0.5; 10];
        let report = validate(&sys);
        let hits: Vec<_> = report
            .violations
            .iter()
            .filter(|v| v.code == "vre.profile_length")
            .collect();
        assert_eq!(hits.len(), 1);
        assert!(hits[0].message.contains("10"));
        assert!(hits[0].message.contains("12"));
    }

    #[test]
    fn two_mandates_violate_at_most_one_rule() {
        let mut sys = two_zone_toy();
        sys.fuels.push(FuelSpec {
            name: "diesel".into(),
            role: FuelRole::Liquid,
            price_eur_per_mwh: 96.9,
            co2_t_per_mwh: 0.2495,
        });
        sys.fuels.push(FuelSpec {
            name: "gasoline".into(),
            role: FuelRole::Liquid,
            price_eur_per_mwh: 79.9,
            co2_t_per_mwh: 0.2437,
        });
        sys.policy.mandates = vec![
            Mandate {
                fuel: "diesel".into(),
                zeta: 0.25,
            },
            Mandate {
                fuel: "gasoline".into(),
                zeta: 0.25,
            },
        ];
        let report = validate(&sys);
        assert!(report
            .violations
            .iter()
            .any(|v| v.code == "policy.mandate_count"));
    }

    #[test]
    fn dangling_zone_reference_is_reported() {
        let mut sys = two_zone_toy();
        sys.vre[0].zone = "atlantis".into();
        let report = validate(&sys);
        assert!(report
            .violations
            .iter()
            .any(|v| v.code == "zone.dangling" && v.message.contains("atlantis")));
    }

    #[test]
    fn grid_weight_invariant_enforced() {
        let mut sys = two_zone_toy();
        sys.grid.periods[0].weight = 100.0;
        sys.vre[0].profile = vec![0.5; 12];
        let report = validate(&sys);
        assert!(report
            .violations
            .iter()
            .any(|v| v.code == "grid.weighted_hours"));
    }
}
