//! Criterion 8: five-fold cross-validation on the Tehran housing data, run
//! only when `DPMREG_TEHRAN_CSV` points at the file.
//!
//! `DPMREG_TEHRAN_RESPONSE` names the response column (default `profit`)
//! and `DPMREG_TEHRAN_LOG=1` log-transforms it before normalising.

use dpmreg::experiment::{cross_validate, mean_and_se, FitSettings, Method};
use dpmreg::model::Hyperparams;
use dpmreg_cli::io::load_dataset;

use crate::common::Check;

pub const ENV: &str = "DPMREG_TEHRAN_CSV";

/// `None` when the data file is not supplied.
pub fn run() -> Option<Vec<Check>> {
    let path = std::env::var_os(ENV)?;
    let response = std::env::var("DPMREG_TEHRAN_RESPONSE").unwrap_or_else(|_| "profit".into());
    let log = std::env::var("DPMREG_TEHRAN_LOG").is_ok_and(|v| v == "1");
    let data = load_dataset(path.as_ref(), &response, log).unwrap_or_else(|e| panic!("{e}"));
    // DP mass prior Ga(2, rate 20)
    let hyper = Hyperparams { alpha_shape: 2.0, alpha_rate: 20.0, ..Hyperparams::default() };
    let settings = FitSettings::default();
    let l2 = |m: Method| {
        let folds = cross_validate(&data, m, &hyper, &settings, 5, 1).unwrap_or_else(|e| panic!("{e}"));
        mean_and_se(&folds.iter().map(|f| f.l2).collect::<Vec<_>>()).0
    };
    let (hs, nd) = (l2(Method::HsDpm), l2(Method::NDpm));
    Some(vec![Check::below("HS-DPM mean L2 (normalised)", hs, 0.3), Check::below("HS-DPM L2 minus N-DPM L2", hs - nd, 0.0)])
}
