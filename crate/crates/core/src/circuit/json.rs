//! Circuit JSON:
//!
//! ```text
//! {"n": 3, "topology": {"kind": "linear"},
//!  "gates": [{"cx": [0, 1]}, {"phase": {"wire": 1, "theta": 0.5}},
//!            {"phase": {"wire": 2, "theta": {"sym": 6}}}]}
//! ```
//!
//! `edges` appears only for `custom` topologies. Symbolic angles carry the
//! signature as an unsigned integer.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Angle, Circuit, Gate, Topology};
use crate::error::{Error, Result};
use crate::f2::SigVec;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitJson {
    n: usize,
    topology: TopologyJson,
    gates: Vec<GateJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<[usize; 2]>>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum GateJson {
    Cx([usize; 2]),
    Phase(PhaseJson),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhaseJson {
    wire: usize,
    theta: ThetaJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ThetaJson {
    Value(f64),
    Sym { sym: u32 },
}

impl Circuit {
    fn to_dto(&self) -> CircuitJson {
        let edges = match &self.topology {
            Topology::Custom(e) => Some(e.iter().map(|&(a, b)| [a, b]).collect()),
            _ => None,
        };
        CircuitJson {
            n: self.n,
            topology: TopologyJson { kind: self.topology.kind().to_string(), edges },
            gates: self
                .gates
                .iter()
                .map(|g| match *g {
                    Gate::Cx { control, target } => GateJson::Cx([control, target]),
                    Gate::Phase { wire, angle } => GateJson::Phase(PhaseJson {
                        wire,
                        theta: match angle {
                            Angle::Value(x) => ThetaJson::Value(x),
                            Angle::Sym(v) => ThetaJson::Sym { sym: v.bits() },
                        },
                    }),
                })
                .collect(),
        }
    }

    fn from_dto(dto: CircuitJson) -> Result<Circuit> {
        let topology = match (dto.topology.kind.as_str(), dto.topology.edges) {
            ("custom", Some(edges)) => Topology::custom(edges.into_iter().map(|[a, b]| (a, b)))?,
            ("custom", None) => return Err(Error::Invalid("custom topology needs edges".into())),
            (kind, None) => kind.parse()?,
            (kind, Some(_)) => return Err(Error::Invalid(format!("edges given for {kind} topology"))),
        };
        let n = dto.n;
        let gates = dto
            .gates
            .into_iter()
            .map(|g| {
                Ok(match g {
                    GateJson::Cx([control, target]) => Gate::Cx { control, target },
                    GateJson::Phase(PhaseJson { wire, theta }) => Gate::Phase {
                        wire,
                        angle: match theta {
                            ThetaJson::Value(x) => Angle::Value(x),
                            ThetaJson::Sym { sym } => Angle::Sym(SigVec::new(sym, n)?),
                        },
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_gates(n, topology, gates)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_dto()).expect("circuit serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Circuit> {
        let dto: CircuitJson = serde_json::from_str(s).map_err(|e| Error::Invalid(format!("circuit JSON: {e}")))?;
        Circuit::from_dto(dto)
    }
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_dto().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = CircuitJson::deserialize(d)?;
        Circuit::from_dto(dto).map_err(serde::de::Error::custom)
    }
}
