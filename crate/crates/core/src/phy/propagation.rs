use serde::{Deserialize, Serialize};

use super::PhyError;

pub const CARRIER_HZ: f64 = 5e9;
pub const PATH_LOSS_EXPONENT: f64 = 4.0;
pub const TX_POWER_DBM: f64 = 20.0;
pub const CARRIER_SENSE_DBM: f64 = -82.0;
const SPEED_OF_LIGHT: f64 = 3e8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Position { x, y, z }
    }
}

pub fn distance(a: Position, b: Position) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2) + (a.z - b.z).powi(2)).sqrt()
}

/// Log-distance path loss with a free-space 1 m reference at 5 GHz.
pub fn path_loss_db(distance_m: f64) -> Result<f64, PhyError> {
    if distance_m.is_nan() || distance_m <= 0.0 {
        return Err(PhyError::NonPositiveDistance(distance_m));
    }
    let reference = 20.0 * (4.0 * std::f64::consts::PI * CARRIER_HZ / SPEED_OF_LIGHT).log10();
    Ok(reference + 10.0 * PATH_LOSS_EXPONENT * distance_m.log10())
}

/// Received power with 0 dB antenna gains.
pub fn rssi_dbm(tx_power_dbm: f64, distance_m: f64) -> Result<f64, PhyError> {
    Ok(tx_power_dbm - path_loss_db(distance_m)?)
}
