//! JSON file formats for states, circuits, state loops and coherent points.
//!
//! ```text
//! state:   { "n": 2, "amplitudes": { "00": [0.707, 0.0], "11": [0.707, 0.0] } }
//! circuit: { "n": 2, "gates": [ { "kind": "H", "qubits": [1] },
//!                               { "kind": "CU", "qubits": [1, 2], "u": [[[1,0],[0,0]],[[0,0],[1,0]]] } ] }
//! loop:    { "n": 1, "states": [ { "0": [1, 0] }, ... ] }
//! point:   { "z": [[1, 0], [0, 0]] }
//! ```
//!
//! Duplicate amplitude keys and unknown gate kinds are rejected. Floats are
//! written with 17 significant digits.

use std::collections::BTreeSet;
use std::fmt;
use std::io;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{Circuit, GateKind, GateSpec};
use crate::holostate::{BitString, HoloState};
use crate::semiclassical::CoherentPoint;
use crate::{Unitary2, C64};

/// serde_json formatter printing every float as `{:.16e}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SigDigitsFormatter;

impl serde_json::ser::Formatter for SigDigitsFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes `value` as compact JSON with 17-significant-digit floats.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitsFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Format(e.to_string()))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn parse<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

impl<'de> Deserialize<'de> for GateKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| de::Error::custom(format!("unknown gate kind {s:?}")))
    }
}

impl Serialize for GateKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Amplitude map that refuses duplicate and malformed keys while parsing.
#[derive(Clone, Debug, Default, PartialEq)]
struct Amplitudes(Vec<(BitString, C64)>);

impl<'de> Deserialize<'de> for Amplitudes {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct AmpVisitor;

        impl<'de> Visitor<'de> for AmpVisitor {
            type Value = Amplitudes;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from bit strings to [re, im] pairs")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<Amplitudes, A::Error> {
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                while let Some(key) = map.next_key::<String>()? {
                    if !seen.insert(key.clone()) {
                        return Err(de::Error::custom(format!(
                            "duplicate amplitude key {key:?}"
                        )));
                    }
                    let bits: BitString = key
                        .parse()
                        .map_err(|_| de::Error::custom(format!("invalid bit string {key:?}")))?;
                    let [re, im]: [f64; 2] = map.next_value()?;
                    out.push((bits, C64::new(re, im)));
                }
                Ok(Amplitudes(out))
            }
        }

        d.deserialize_map(AmpVisitor)
    }
}

struct AmplitudesRef<'a>(&'a HoloState);

impl Serialize for AmplitudesRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let amps = self.0.amplitudes();
        let mut m = s.serialize_map(Some(amps.len()))?;
        for (k, c) in amps {
            m.serialize_entry(&k.to_string(), &[c.re, c.im])?;
        }
        m.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    n: usize,
    amplitudes: Amplitudes,
}

#[derive(Serialize)]
struct StateFileOut<'a> {
    n: usize,
    amplitudes: AmplitudesRef<'a>,
}

fn build_state(n: usize, amps: Amplitudes) -> Result<HoloState> {
    HoloState::from_amplitudes(n, amps.0)
}

pub fn parse_state(text: &str) -> Result<HoloState> {
    let f: StateFile = parse(text)?;
    build_state(f.n, f.amplitudes)
}

pub fn state_to_json(state: &HoloState) -> Result<String> {
    to_json_string(&StateFileOut {
        n: state.nqubits(),
        amplitudes: AmplitudesRef(state),
    })
}

type RawUnitary = [[[f64; 2]; 2]; 2];

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct GateEntry {
    kind: GateKind,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<RawUnitary>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    n: usize,
    gates: Vec<GateEntry>,
}

fn unitary_from_raw(u: &RawUnitary) -> Unitary2 {
    let c = |p: [f64; 2]| C64::new(p[0], p[1]);
    Unitary2::new(c(u[0][0]), c(u[0][1]), c(u[1][0]), c(u[1][1]))
}

fn unitary_to_raw(u: &Unitary2) -> RawUnitary {
    let p = |c: C64| [c.re, c.im];
    [[p(u[(0, 0)]), p(u[(0, 1)])], [p(u[(1, 0)]), p(u[(1, 1)])]]
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let f: CircuitFile = parse(text)?;
    let gates = f
        .gates
        .into_iter()
        .map(|g| GateSpec {
            kind: g.kind,
            qubits: g.qubits,
            u: g.u.as_ref().map(unitary_from_raw),
        })
        .collect();
    Circuit::new(f.n, gates)
}

pub fn circuit_to_json(circuit: &Circuit) -> Result<String> {
    let file = CircuitFile {
        n: circuit.nqubits,
        gates: circuit
            .gates
            .iter()
            .map(|g| GateEntry {
                kind: g.kind,
                qubits: g.qubits.clone(),
                u: g.u.as_ref().map(unitary_to_raw),
            })
            .collect(),
    };
    to_json_string(&file)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopFile {
    n: usize,
    states: Vec<Amplitudes>,
}

/// Explicit list of states for a holonomy loop.
pub fn parse_state_list(text: &str) -> Result<Vec<HoloState>> {
    let f: LoopFile = parse(text)?;
    f.states.into_iter().map(|a| build_state(f.n, a)).collect()
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    z: Vec<[f64; 2]>,
}

pub fn parse_coherent_point(text: &str) -> Result<CoherentPoint> {
    let f: PointFile = parse(text)?;
    CoherentPoint::new(f.z.into_iter().map(|[re, im]| C64::new(re, im)).collect())
}

pub fn coherent_point_to_json(p: &CoherentPoint) -> Result<String> {
    to_json_string(&PointFile {
        z: p.z().iter().map(|c| [c.re, c.im]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_round_trip() {
        let text = r#"{ "n": 2, "amplitudes": { "00": [0.75, 0.0], "11": [0.0, -0.25] } }"#;
        let s = parse_state(text).unwrap();
        let back = parse_state(&state_to_json(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        let text = state_to_json(&s).unwrap();
        assert!(text.contains("7.5000000000000000e-1"), "{text}");
        assert!(text.contains("-2.5000000000000000e-1"), "{text}");
    }

    #[test]
    fn duplicate_keys_rejected() {
        let text = r#"{ "n": 1, "amplitudes": { "0": [1, 0], "0": [0, 0] } }"#;
        let err = parse_state(text).unwrap_err().to_string();
        assert!(err.contains("duplicate amplitude key \"0\""), "{err}");
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn bad_bit_strings_rejected() {
        let bad = r#"{ "n": 2, "amplitudes": { "0x": [1, 0] } }"#;
        assert!(parse_state(bad).is_err());
        let short = r#"{ "n": 2, "amplitudes": { "0": [1, 0] } }"#;
        assert!(matches!(
            parse_state(short),
            Err(Error::BitStringLength { .. })
        ));
    }

    #[test]
    fn circuit_parsing() {
        let text = r#"{ "n": 2, "gates": [
            { "kind": "H", "qubits": [1] },
            { "kind": "CNOT", "qubits": [1, 2] },
            { "kind": "CU", "qubits": [2, 1], "u": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]] }
        ] }"#;
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.gates[2].kind, GateKind::Cu);
        assert_eq!(parse_circuit(&circuit_to_json(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn unknown_kind_names_the_kind() {
        let text = "{ \"n\": 1,\n \"gates\": [ { \"kind\": \"TOFFOLI\", \"qubits\": [1] } ] }";
        let err = parse_circuit(text).unwrap_err().to_string();
        assert!(err.contains("TOFFOLI"), "{err}");
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn non_unitary_payload_rejected() {
        let text = r#"{ "n": 2, "gates": [ { "kind": "CU", "qubits": [1, 2], "u": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]] } ] }"#;
        assert!(matches!(parse_circuit(text), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn loops_and_points() {
        let text = r#"{ "n": 1, "states": [ { "0": [1, 0] }, { "1": [0, 1] } ] }"#;
        assert_eq!(parse_state_list(text).unwrap().len(), 2);
        let p = parse_coherent_point(r#"{ "z": [[1, 0], [0, 0.5]] }"#).unwrap();
        assert_eq!(
            parse_coherent_point(&coherent_point_to_json(&p).unwrap()).unwrap(),
            p
        );
    }
}
