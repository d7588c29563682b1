use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Rwp,
    Tlw,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RwpParams {
    /// m/s
    pub speed_min: f64,
    /// m/s
    pub speed_max: f64,
    /// s
    pub pause: f64,
}

impl Default for RwpParams {
    fn default() -> Self {
        RwpParams {
            speed_min: 0.01,
            speed_max: 0.1,
            pause: 0.0,
        }
    }
}

/// Flight duration as a function of flight length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpeedCoupling {
    /// Every flight at `speed` m/s.
    Constant { speed: f64 },
    /// Duration `k * l^(1 - rho)`, hence speed `l^rho / k`.
    PowerLaw { k: f64, rho: f64 },
}

impl SpeedCoupling {
    pub fn flight_duration(&self, length: f64) -> f64 {
        match *self {
            SpeedCoupling::Constant { speed } => length / speed,
            SpeedCoupling::PowerLaw { k, rho } => k * length.powf(1.0 - rho),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TlwParams {
    /// Flight-length exponent: `p(l) ~ l^-(1 + alpha)`.
    pub alpha: f64,
    /// Pause-time exponent: `p(t) ~ t^-(1 + beta)`.
    pub beta: f64,
    pub l_min: f64,
    pub l_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub speed_coupling: SpeedCoupling,
}

impl Default for TlwParams {
    fn default() -> Self {
        TlwParams {
            alpha: 1.6,
            beta: 0.8,
            l_min: 1.0,
            l_max: 40.0,
            t_min: 20.0,
            t_max: 3600.0,
            speed_coupling: SpeedCoupling::PowerLaw { k: 1.0, rho: 0.5 },
        }
    }
}

/// Parameters of a synthetic mobility run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobilityConfig {
    pub model: Model,
    pub node_count: usize,
    pub area: Area,
    /// Contact distance in meters (inclusive).
    pub detection_range: f64,
    /// Seconds between position samples; also the contact frame length.
    pub sample_interval: u64,
    /// Recorded duration in seconds.
    pub duration: u64,
    pub seed: u64,
    /// Simulated seconds discarded before recording. Defaults to one hour
    /// for TLW and zero for RWP.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warmup: Option<f64>,
    #[serde(default)]
    pub rwp: RwpParams,
    #[serde(default)]
    pub tlw: TlwParams,
}

impl MobilityConfig {
    fn base(model: Model, seed: u64) -> Self {
        MobilityConfig {
            model,
            node_count: 100,
            area: Area {
                width: 40.0,
                height: 40.0,
            },
            detection_range: 2.0,
            sample_interval: 20,
            duration: 24 * 3600,
            seed,
            warmup: None,
            rwp: RwpParams::default(),
            tlw: TlwParams::default(),
        }
    }

    /// 100 nodes on 40 m x 40 m, 2 m range, 20 s sampling, 24 h,
    /// speeds uniform on [0.01, 0.1] m/s.
    pub fn reference_rwp(seed: u64) -> Self {
        Self::base(Model::Rwp, seed)
    }

    /// Same world as [`Self::reference_rwp`] with alpha 1.6, beta 0.8,
    /// flights up to 40 m and pauses up to one hour.
    pub fn reference_tlw(seed: u64) -> Self {
        Self::base(Model::Tlw, seed)
    }

    pub fn warmup_secs(&self) -> f64 {
        self.warmup.unwrap_or(match self.model {
            Model::Rwp => 0.0,
            Model::Tlw => 3600.0,
        })
    }

    /// Number of position samples per node.
    pub fn sample_count(&self) -> usize {
        (self.duration / self.sample_interval) as usize + 1
    }

    /// Upper bound on node speed, used to bound per-sample displacement.
    pub fn max_speed(&self) -> f64 {
        match self.model {
            Model::Rwp => self.rwp.speed_max,
            Model::Tlw => match self.tlw.speed_coupling {
                SpeedCoupling::Constant { speed } => speed,
                SpeedCoupling::PowerLaw { k, rho } => {
                    let at = |l: f64| l.powf(rho) / k;
                    at(self.tlw.l_min).max(at(self.tlw.l_max))
                }
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        let pos = |x: f64| x > 0.0 && x.is_finite();
        if self.node_count == 0 {
            return fail("node_count must be at least 1".into());
        }
        if !pos(self.area.width) || !pos(self.area.height) {
            return fail(format!("area {:?} must have positive dimensions", self.area));
        }
        if !pos(self.detection_range) || self.detection_range >= self.area.width.min(self.area.height) {
            return fail(format!(
                "detection_range {} must be positive and below the smaller area side",
                self.detection_range
            ));
        }
        if self.sample_interval == 0 {
            return fail("sample_interval must be positive".into());
        }
        if let Some(w) = self.warmup {
            if !(w >= 0.0 && w.is_finite()) {
                return fail(format!("warmup {w} must be non-negative"));
            }
        }
        match self.model {
            Model::Rwp => {
                let r = &self.rwp;
                if !(pos(r.speed_min) && r.speed_min <= r.speed_max && r.speed_max.is_finite()) {
                    return fail(format!(
                        "rwp speeds must satisfy 0 < speed_min <= speed_max (got {} and {})",
                        r.speed_min, r.speed_max
                    ));
                }
                if !(r.pause >= 0.0 && r.pause.is_finite()) {
                    return fail(format!("rwp pause {} must be non-negative", r.pause));
                }
            }
            Model::Tlw => {
                let t = &self.tlw;
                if !pos(t.alpha) || !pos(t.beta) {
                    return fail(format!(
                        "tlw exponents must be positive (alpha {}, beta {})",
                        t.alpha, t.beta
                    ));
                }
                if !(pos(t.l_min) && t.l_min < t.l_max && t.l_max.is_finite()) {
                    return fail(format!("tlw needs 0 < l_min < l_max (got {} and {})", t.l_min, t.l_max));
                }
                if !(pos(t.t_min) && t.t_min < t.t_max && t.t_max.is_finite()) {
                    return fail(format!("tlw needs 0 < t_min < t_max (got {} and {})", t.t_min, t.t_max));
                }
                match t.speed_coupling {
                    SpeedCoupling::Constant { speed } if !pos(speed) => {
                        return fail(format!("constant flight speed {speed} must be positive"));
                    }
                    SpeedCoupling::PowerLaw { k, rho } if !pos(k) || !rho.is_finite() => {
                        return fail(format!(
                            "power-law coupling needs k > 0 and finite rho (got {k}, {rho})"
                        ));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}
