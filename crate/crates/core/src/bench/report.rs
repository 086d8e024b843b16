use serde::{Deserialize, Serialize};

/// One row of the comparison table. Absent values are metrics that do not apply
/// to the representation or suites that were not run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub representation: String,
    pub storage_bytes: usize,
    pub eps_stab: Option<f64>,
    pub s_gimbal: Option<f64>,
    pub s_double: Option<f64>,
    pub path_length: Option<f64>,
    pub eps_geo: Option<f64>,
    pub sigma_deriv: Option<f64>,
    pub f_rate: Option<f64>,
    pub eps_avg: Option<f64>,
    pub eps_max: Option<f64>,
    pub t_comp: Option<f64>,
    pub t_interp: Option<f64>,
    pub t_batch: Option<f64>,
    pub a_mem: f64,
    pub h_opt: Option<f64>,
    pub c_ml: Option<f64>,
    /// Set when any timing in the row came from a degenerate or coarse-clock run.
    pub timing_low_confidence: Option<bool>,
    /// Sub-suite failures for this row, `; `-separated.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Count(usize),
    Real(f64),
    Flag(bool),
    Absent,
}

impl BenchReport {
    pub const FIELDS: [&'static str; 19] = [
        "representation",
        "storage_bytes",
        "eps_stab",
        "s_gimbal",
        "s_double",
        "path_length",
        "eps_geo",
        "sigma_deriv",
        "f_rate",
        "eps_avg",
        "eps_max",
        "t_comp",
        "t_interp",
        "t_batch",
        "a_mem",
        "h_opt",
        "c_ml",
        "timing_low_confidence",
        "error",
    ];

    /// Fields whose values depend on the machine and the run.
    pub const TIMING_FIELDS: [&'static str; 4] =
        ["t_comp", "t_interp", "t_batch", "timing_low_confidence"];

    pub fn new(representation: &str, storage_bytes: usize, a_mem: f64) -> Self {
        Self {
            representation: representation.to_string(),
            storage_bytes,
            eps_stab: None,
            s_gimbal: None,
            s_double: None,
            path_length: None,
            eps_geo: None,
            sigma_deriv: None,
            f_rate: None,
            eps_avg: None,
            eps_max: None,
            t_comp: None,
            t_interp: None,
            t_batch: None,
            a_mem,
            h_opt: None,
            c_ml: None,
            timing_low_confidence: None,
            error: None,
        }
    }

    /// Values in [`Self::FIELDS`] order.
    pub fn cells(&self) -> Vec<Cell> {
        let real = |v: Option<f64>| v.map_or(Cell::Absent, Cell::Real);
        vec![
            Cell::Text(self.representation.clone()),
            Cell::Count(self.storage_bytes),
            real(self.eps_stab),
            real(self.s_gimbal),
            real(self.s_double),
            real(self.path_length),
            real(self.eps_geo),
            real(self.sigma_deriv),
            real(self.f_rate),
            real(self.eps_avg),
            real(self.eps_max),
            real(self.t_comp),
            real(self.t_interp),
            real(self.t_batch),
            Cell::Real(self.a_mem),
            real(self.h_opt),
            real(self.c_ml),
            self.timing_low_confidence.map_or(Cell::Absent, Cell::Flag),
            self.error.clone().map_or(Cell::Absent, Cell::Text),
        ]
    }

    pub(crate) fn push_error(&mut self, what: &str, err: impl std::fmt::Display) {
        let msg = format!("{what}: {err}");
        match &mut self.error {
            Some(e) => {
                e.push_str("; ");
                e.push_str(&msg);
            }
            None => self.error = Some(msg),
        }
    }
}
