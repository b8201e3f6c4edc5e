//! The full chain from an input file to the invariant report.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::charpoly::{self, FactoredCyclo};
use crate::error::Error;
use crate::graph::{Decomposition, NamedChain, NtGraph, OrbitTag, ResolutionGraph};
use crate::io::{self, int_json, Format};
use crate::multiplicity;
use crate::quadform::{self, ChainBasis, GramForm};
use crate::screw::{self, ScrewAssignment};
use crate::semistable::{self, PieceData};

/// An error tagged with the stage that raised it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageError {
    pub stage: &'static str,
    pub error: Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

fn at<T>(stage: &'static str, r: crate::Result<T>) -> Result<T, StageError> {
    r.map_err(|error| StageError { stage, error })
}

#[derive(Debug, Clone)]
pub enum Input {
    Resolution(ResolutionGraph),
    Nt(NtGraph),
}

/// Parses an `rg1` or `nt1` document, dispatching on its header.
pub fn load(text: &str) -> crate::Result<Input> {
    match io::detect_format(text)? {
        Format::Rg1 => Ok(Input::Resolution(io::parse_resolution(text)?)),
        Format::Nt1 => Ok(Input::Nt(io::parse_ntgraph(text)?)),
        Format::Chain1 => Err(Error::Parse(crate::ParseError::new(
            1,
            8,
            "expected a graph (rg1 or nt1), found a chain file",
            "chain1",
        ))),
    }
}

/// Everything derived from a resolution graph up to Γ_ss.
#[derive(Debug, Clone)]
pub struct ResolutionStages {
    pub graph: ResolutionGraph,
    pub mults: Vec<u64>,
    pub decomposition: Decomposition,
    pub screws: ScrewAssignment,
    pub pieces: Vec<PieceData>,
    pub nt: NtGraph,
}

pub fn resolve(graph: &ResolutionGraph) -> Result<ResolutionStages, StageError> {
    let mults = at("mult", multiplicity::multiplicities(graph))?;
    let decomposition = at("decompose", graph.decompose())?;
    let screws = at("screw", screw::compute_screws(graph, &decomposition, &mults))?;
    let ss = at("ssred", semistable::build_ntgraph(graph, &decomposition, &mults, &screws))?;
    Ok(ResolutionStages {
        graph: graph.clone(),
        mults,
        decomposition,
        screws,
        pieces: ss.pieces,
        nt: ss.graph,
    })
}

#[derive(Debug, Clone)]
pub struct Report {
    pub resolution: Option<ResolutionStages>,
    pub nt: NtGraph,
    pub basis: ChainBasis,
    pub form: GramForm,
    /// `Err` when Δ is undefined for the input (positive genus, no arrows).
    pub delta: Result<FactoredCyclo, Error>,
    pub delta2: FactoredCyclo,
    pub jordan_blocks: usize,
    pub quotient_is_tree: bool,
}

/// Runs every stage. Without an explicit basis the spanning-tree basis is
/// used.
pub fn run(input: &Input, basis: Option<Vec<NamedChain>>) -> Result<Report, StageError> {
    let (resolution, nt) = match input {
        Input::Resolution(g) => {
            let stages = resolve(g)?;
            let nt = stages.nt.clone();
            (Some(stages), nt)
        }
        Input::Nt(nt) => (None, nt.clone()),
    };
    let basis = match basis {
        Some(chains) => at("basis", ChainBasis::new(&nt, chains))?,
        None => quadform::default_basis(&nt),
    };
    let form = at("gram", quadform::gram(&nt, &basis))?;
    let delta = match &resolution {
        Some(r) => match charpoly::delta(&r.graph, &r.mults) {
            Err(e @ (Error::NonRationalVertex(_) | Error::NoArrowheads)) => Err(e),
            other => Ok(at("charpoly", other)?),
        },
        None => Err(Error::InvalidValue {
            id: "delta".into(),
            reason: "needs a resolution graph".into(),
        }),
    };
    let delta2 = at("charpoly", charpoly::delta2(&nt))?;
    Ok(Report {
        jordan_blocks: charpoly::jordan_block_count(&nt),
        quotient_is_tree: nt.is_quotient_tree(),
        resolution,
        nt,
        basis,
        form,
        delta,
        delta2,
    })
}

fn orbit_fields(obj: &mut Map<String, Value>, tag: &Option<OrbitTag>) {
    if let Some(t) = tag {
        obj.insert("orbit".into(), json!(t.orbit));
        obj.insert("index".into(), json!(t.index));
    }
}

pub fn nt_json(nt: &NtGraph) -> Value {
    let pieces: Vec<Value> = nt
        .pieces()
        .iter()
        .map(|p| {
            let mut o = Map::new();
            o.insert("id".into(), json!(p.id));
            o.insert("genus".into(), json!(p.genus));
            orbit_fields(&mut o, &p.orbit);
            Value::Object(o)
        })
        .collect();
    let edges: Vec<Value> = nt
        .edges()
        .iter()
        .map(|e| {
            let mut o = Map::new();
            o.insert("id".into(), json!(e.id));
            o.insert("src".into(), json!(nt.pieces()[e.src].id));
            o.insert("dst".into(), json!(nt.pieces()[e.dst].id));
            o.insert("screw".into(), int_json(&e.screw));
            orbit_fields(&mut o, &e.orbit);
            Value::Object(o)
        })
        .collect();
    let arrows: Vec<Value> = nt
        .arrows()
        .iter()
        .map(|a| {
            let mut o = Map::new();
            o.insert("id".into(), json!(a.id));
            o.insert("piece".into(), json!(nt.pieces()[a.piece].id));
            o.insert("screw".into(), int_json(&a.screw));
            orbit_fields(&mut o, &a.orbit);
            Value::Object(o)
        })
        .collect();
    json!({ "pieces": pieces, "edges": edges, "arrows": arrows })
}

pub fn screws_json(s: &ScrewAssignment) -> Value {
    json!({
        "e": int_json(&s.e),
        "bamboos": s.entries.iter().map(|b| json!({
            "bamboo": b.bamboo,
            "kind": b.kind.as_str(),
            "d": b.d,
            "scn": b.scn.to_string(),
            "s": int_json(&b.s),
        })).collect::<Vec<_>>(),
    })
}

pub fn cyclo_json(f: &FactoredCyclo) -> Value {
    let factors: Vec<Value> = f.factors().map(|(n, k)| json!({ "n": n, "k": k })).collect();
    json!({ "factored": f.to_string(), "factors": factors, "degree": f.degree() })
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        o.insert("input".into(), json!(if self.resolution.is_some() { "rg1" } else { "nt1" }));
        if let Some(r) = &self.resolution {
            let mults: Map<String, Value> = r
                .graph
                .vertices()
                .iter()
                .zip(&r.mults)
                .map(|(v, m)| (v.id.clone(), json!(m)))
                .collect();
            o.insert("multiplicities".into(), Value::Object(mults));
            o.insert("screws".into(), screws_json(&r.screws));
            let pieces: Vec<Value> = r
                .pieces
                .iter()
                .map(|p| json!({"node": p.node, "components": p.d_v, "chi": p.chi, "boundary": p.r, "genus": p.genus}))
                .collect();
            o.insert("pieces".into(), Value::Array(pieces));
        }
        o.insert("ntgraph".into(), nt_json(&self.nt));
        o.insert("form".into(), io::form_json(&self.form));
        match &self.delta {
            Ok(d) => {
                o.insert("delta".into(), cyclo_json(d));
                o.insert("milnor_number".into(), json!(d.degree()));
            }
            Err(e) => {
                o.insert("delta".into(), json!({ "unavailable": e.to_string() }));
            }
        }
        o.insert("delta2".into(), cyclo_json(&self.delta2));
        o.insert("jordan_blocks".into(), json!(self.jordan_blocks));
        o.insert("quotient_is_tree".into(), json!(self.quotient_is_tree));
        Value::Object(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_report() {
        let text = "format rg1\nvertex v1 genus=0 euler=-3\nvertex v2 genus=0 euler=-2\nvertex v3 genus=0 euler=-1\nedge v1 v3\nedge v2 v3\narrow c v3\n";
        let report = run(&load(text).unwrap(), None).unwrap();
        assert_eq!(report.form.dim(), 0);
        assert_eq!(report.delta.as_ref().unwrap().to_string(), "(t^1-1)^1 (t^6-1)^1 (t^2-1)^-1 (t^3-1)^-1");
        assert_eq!(report.delta.as_ref().unwrap().degree(), 2);
        let j = report.to_json();
        assert_eq!(j["multiplicities"]["v3"], json!(6));
        assert_eq!(j["milnor_number"], json!(2));
    }

    #[test]
    fn stage_labels() {
        let text = "format rg1\nvertex x genus=0 euler=0\narrow a x\n";
        let err = run(&load(text).unwrap(), None).unwrap_err();
        assert_eq!(err.stage, "mult");
        assert_eq!(err.error, Error::NotNegativeDefinite);
    }
}
