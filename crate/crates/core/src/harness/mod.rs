//! Campaign configuration, execution and reporting.
//!
//! A configuration file holds one TOML table per campaign. Each campaign
//! expands into parameter points whose checks become [`CheckRecord`]s; the
//! records of all campaigns are merged into a single sorted [`Report`].

mod campaign;
mod config;
mod oracle;
mod report;

pub use campaign::{run_campaign, run_campaign_in, run_campaigns, Fragment};
pub use config::{
    parse_config, parse_config_str, BlowupSpec, Campaign, CampaignKind, CampaignSpec,
    ComparisonSpec, EigenSpec, L1Spec, ScalarBlowupSpec, SweepSpec,
};
pub use oracle::{parse_ml_oracle_table, OracleRow, ML_ORACLE_TABLE};
pub use report::{fmt_num, write_outputs, CheckRecord, Report, TraceFile};

/// The built-in acceptance suite.
pub const DEFAULT_SUITE: &str = include_str!("../../configs/acceptance.toml");

/// Parses [`DEFAULT_SUITE`].
pub fn default_suite() -> crate::Result<Vec<Campaign>> {
    parse_config_str(DEFAULT_SUITE)
}
