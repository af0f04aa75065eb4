use serde::{Deserialize, Serialize};

use super::functions::{Gaussian, PolyBump, SmoothFunction, TrigGaussian, Zero};
use crate::error::{Error, Result};
use crate::poly::MPoly;

fn one() -> f64 {
    1.0
}

/// JSON descriptor of a built-in smooth function, tagged by `family`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    Gaussian {
        center: Vec<f64>,
        sigma: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    TrigGaussian {
        center: Vec<f64>,
        sigma: f64,
        freq: Vec<f64>,
        phase: Vec<f64>,
    },
    PolyBump {
        poly: String,
        lo: Vec<f64>,
        hi: Vec<f64>,
        width: f64,
        smoothness: usize,
    },
    Zero {
        dim: usize,
    },
}

impl FunctionSpec {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn dim(&self) -> usize {
        match self {
            FunctionSpec::Gaussian { center, .. } | FunctionSpec::TrigGaussian { center, .. } => {
                center.len()
            }
            FunctionSpec::PolyBump { lo, .. } => lo.len(),
            FunctionSpec::Zero { dim } => *dim,
        }
    }

    pub fn build(&self) -> Result<Box<dyn SmoothFunction>> {
        let bad = |what: &str| Err(Error::Dimension(format!("function descriptor: {what}")));
        Ok(match self {
            FunctionSpec::Gaussian {
                center,
                sigma,
                amplitude,
            } => {
                if *sigma <= 0.0 {
                    return bad("sigma must be positive");
                }
                Box::new(Gaussian {
                    center: center.clone(),
                    sigma: *sigma,
                    amplitude: *amplitude,
                })
            }
            FunctionSpec::TrigGaussian {
                center,
                sigma,
                freq,
                phase,
            } => {
                if *sigma <= 0.0 {
                    return bad("sigma must be positive");
                }
                if freq.len() != center.len() || phase.len() != center.len() {
                    return bad("freq and phase need one entry per coordinate");
                }
                Box::new(TrigGaussian {
                    envelope: Gaussian {
                        center: center.clone(),
                        sigma: *sigma,
                        amplitude: 1.0,
                    },
                    freq: freq.clone(),
                    phase: phase.clone(),
                })
            }
            FunctionSpec::PolyBump {
                poly,
                lo,
                hi,
                width,
                smoothness,
            } => {
                if lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| a > b) || *width <= 0.0 {
                    return bad("bump box is malformed");
                }
                let p = MPoly::parse(poly, lo.len())?;
                Box::new(PolyBump::new(
                    &p,
                    lo.clone(),
                    hi.clone(),
                    *width,
                    *smoothness,
                ))
            }
            FunctionSpec::Zero { dim } => Box::new(Zero(*dim)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build() {
        let s = FunctionSpec::parse(r#"{"family":"gaussian","center":[1,2],"sigma":0.5}"#).unwrap();
        assert_eq!(
            s,
            FunctionSpec::Gaussian {
                center: vec![1.0, 2.0],
                sigma: 0.5,
                amplitude: 1.0
            }
        );
        let f = s.build().unwrap();
        assert_eq!(f.value(&[1.0, 2.0]), 1.0);
        let back = FunctionSpec::parse(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        assert!(matches!(
            FunctionSpec::parse(r#"{"family":"gaussian","center":[0],"sigma":1,"colour":3}"#),
            Err(Error::Parse(_))
        ));
        let s = FunctionSpec::Gaussian {
            center: vec![0.0],
            sigma: -1.0,
            amplitude: 1.0,
        };
        assert!(s.build().is_err());
        let b = FunctionSpec::PolyBump {
            poly: "x1*x2".into(),
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
            width: 0.5,
            smoothness: 4,
        };
        assert_eq!(b.build().unwrap().value(&[0.5, 0.5]), 0.25);
    }
}
