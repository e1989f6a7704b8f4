use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PrepError;
use crate::netgraph::{
    build_tree_config, Edge, EdgeId, NetError, Network, TreeConfig, Vertex, VertexId, VoltageClass,
};

pub const BUS_COLUMNS: [&str; 6] = ["bus_id", "x", "y", "demand_kw", "voltage_class", "is_root"];
pub const LINE_COLUMNS: [&str; 6] = [
    "line_id",
    "from_bus",
    "to_bus",
    "status",
    "resistance",
    "failure_weight",
];

#[derive(Debug, Deserialize, Serialize)]
struct BusRow {
    bus_id: String,
    x: Option<f64>,
    y: Option<f64>,
    demand_kw: f64,
    voltage_class: String,
    is_root: String,
}

#[derive(Debug, Deserialize, Serialize)]
struct LineRow {
    line_id: String,
    from_bus: String,
    to_bus: String,
    status: String,
    resistance: f64,
    #[serde(default)]
    failure_weight: Option<f64>,
}

fn open(path: &Path) -> Result<File, PrepError> {
    File::open(path).map_err(|e| PrepError::Io(format!("{}: {e}", path.display())))
}

/// Reads `buses.csv` and `lines.csv`. Returns the network and its tree (the
/// lines with status `tree`).
pub fn ingest_csv(buses: &Path, lines: &Path) -> Result<(Network, TreeConfig), PrepError> {
    ingest_readers(
        open(buses)?,
        &buses.display().to_string(),
        open(lines)?,
        &lines.display().to_string(),
    )
}

fn rows<T: serde::de::DeserializeOwned, R: Read>(
    reader: R,
    file: &str,
    columns: &[&str],
) -> Result<Vec<(u64, T)>, PrepError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| PrepError::Io(format!("{file}: {e}")))?
        .clone();
    let err = |row: u64, column: &str, message: String| PrepError::Parse {
        file: file.to_string(),
        row,
        column: column.to_string(),
        message,
    };
    for &c in columns {
        if !headers.iter().any(|h| h == c) {
            return Err(err(1, c, "missing column".into()));
        }
    }
    let mut out = Vec::new();
    let mut rec = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut rec) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                let row = e.position().map_or(0, |p| p.line());
                return Err(err(row, "?", e.to_string()));
            }
        }
        let row = rec.position().map_or(0, |p| p.line());
        match rec.deserialize::<T>(Some(&headers)) {
            Ok(r) => out.push((row, r)),
            Err(e) => {
                let (column, message) = match e.kind() {
                    csv::ErrorKind::Deserialize { err, .. } => (
                        err.field()
                            .and_then(|i| headers.get(i as usize))
                            .unwrap_or("?")
                            .to_string(),
                        err.kind().to_string(),
                    ),
                    other => ("?".to_string(), format!("{other:?}")),
                };
                return Err(err(row, &column, message));
            }
        }
    }
    Ok(out)
}

fn parse_flag(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "y" => Some(true),
        "0" | "false" | "no" | "n" | "" => Some(false),
        _ => None,
    }
}

/// [`ingest_csv`] over arbitrary readers; `*_name` labels diagnostics.
/// Lines starting with `#` are skipped.
///
/// The failure weight of a line is the Euclidean distance between its buses
/// unless the optional `failure_weight` column gives one.
pub fn ingest_readers<B: Read, L: Read>(
    buses: B,
    buses_name: &str,
    lines: L,
    lines_name: &str,
) -> Result<(Network, TreeConfig), PrepError> {
    let bus_rows: Vec<(u64, BusRow)> = rows(buses, buses_name, &BUS_COLUMNS)?;
    let line_rows: Vec<(u64, LineRow)> = rows(lines, lines_name, &LINE_COLUMNS[..5])?;
    let bus_err = |row: u64, column: &str, message: String| PrepError::Parse {
        file: buses_name.to_string(),
        row,
        column: column.to_string(),
        message,
    };
    let line_err = |row: u64, column: &str, message: String| PrepError::Parse {
        file: lines_name.to_string(),
        row,
        column: column.to_string(),
        message,
    };

    let mut ids: HashMap<&str, VertexId> = HashMap::new();
    let mut vertices = Vec::with_capacity(bus_rows.len());
    let mut roots = Vec::new();
    for (row, b) in &bus_rows {
        if ids
            .insert(b.bus_id.as_str(), VertexId(vertices.len()))
            .is_some()
        {
            return Err(bus_err(
                *row,
                "bus_id",
                format!("duplicate bus `{}`", b.bus_id),
            ));
        }
        let class: VoltageClass = b
            .voltage_class
            .parse()
            .map_err(|m| bus_err(*row, "voltage_class", m))?;
        let is_root = parse_flag(&b.is_root)
            .ok_or_else(|| bus_err(*row, "is_root", format!("`{}` is not a boolean", b.is_root)))?;
        if is_root {
            roots.push(vertices.len());
        }
        let mut v = Vertex::new(b.bus_id.clone(), b.demand_kw).with_class(class);
        match (b.x, b.y) {
            (Some(x), Some(y)) => v = v.with_coords(x, y),
            (None, None) => {}
            _ => {
                return Err(bus_err(
                    *row,
                    "x",
                    "give both coordinates or neither".into(),
                ))
            }
        }
        vertices.push(v);
    }
    let root = match roots.as_slice() {
        [] => return Err(PrepError::MissingRoot),
        [r] => VertexId(*r),
        many => {
            let names: Vec<&str> = many.iter().map(|&i| vertices[i].name.as_str()).collect();
            return Err(PrepError::MultipleRoots(names.join(", ")));
        }
    };

    let mut edges = Vec::with_capacity(line_rows.len());
    let mut tree = Vec::new();
    let mut pairs = HashSet::new();
    for (row, l) in &line_rows {
        let end = |column: &str, id: &str| {
            ids.get(id)
                .copied()
                .ok_or_else(|| line_err(*row, column, format!("unknown bus `{id}`")))
        };
        let a = end("from_bus", &l.from_bus)?;
        let b = end("to_bus", &l.to_bus)?;
        if a == b {
            return Err(line_err(
                *row,
                "to_bus",
                "line connects a bus to itself".into(),
            ));
        }
        if !pairs.insert((a.min(b), a.max(b))) {
            return Err(PrepError::DuplicateEdge(l.line_id.clone()));
        }
        let in_tree = match l.status.to_ascii_lowercase().as_str() {
            "tree" => true,
            "switch" => false,
            other => {
                return Err(line_err(
                    *row,
                    "status",
                    format!("`{other}` is neither tree nor switch"),
                ))
            }
        };
        let failure = match l.failure_weight {
            Some(p) => p,
            None => {
                let (Some((ax, ay)), Some((bx, by))) = (vertices[a.0].coords, vertices[b.0].coords)
                else {
                    return Err(line_err(
                        *row,
                        "failure_weight",
                        "needed when a bus has no coordinates".into(),
                    ));
                };
                (ax - bx).hypot(ay - by)
            }
        };
        if in_tree {
            tree.push(EdgeId(edges.len()));
        }
        edges.push(Edge::new(l.line_id.clone(), a, b, failure, l.resistance));
    }
    let net = Network::new(vertices, edges, root).map_err(|e| match e {
        NetError::Disconnected => PrepError::DisconnectedInput,
        other => PrepError::Net(other),
    })?;
    let tree = build_tree_config(&net, &tree)?;
    Ok((net, tree))
}

/// Serializes a network and tree as (`buses.csv`, `lines.csv`) text.
/// Failure weights are written explicitly, so reading the pair back gives
/// the same network.
pub fn write_csv(net: &Network, tree: &TreeConfig) -> (String, String) {
    let mut bw = csv::Writer::from_writer(Vec::new());
    for (i, v) in net.vertices().iter().enumerate() {
        bw.serialize(BusRow {
            bus_id: v.name.clone(),
            x: v.coords.map(|c| c.0),
            y: v.coords.map(|c| c.1),
            demand_kw: v.demand,
            voltage_class: v.class.to_string(),
            is_root: if i == net.root().0 { "1" } else { "0" }.into(),
        })
        .expect("writing to memory");
    }
    let mut lw = csv::Writer::from_writer(Vec::new());
    for (i, e) in net.edges().iter().enumerate() {
        lw.serialize(LineRow {
            line_id: e.name.clone(),
            from_bus: net.vertex(e.endpoints.0).name.clone(),
            to_bus: net.vertex(e.endpoints.1).name.clone(),
            status: if tree.is_tree_edge(EdgeId(i)) {
                "tree"
            } else {
                "switch"
            }
            .into(),
            resistance: e.resistance,
            failure_weight: Some(e.failure),
        })
        .expect("writing to memory");
    }
    let text =
        |w: csv::Writer<Vec<u8>>| String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    (text(bw), text(lw))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUSES: &str = "bus_id,x,y,demand_kw,voltage_class,is_root\n\
                         s,0,0,0,MV,1\n\
                         a,100,0,5,LV,0\n\
                         b,100,100,5,LV,0\n";

    fn ingest(buses: &str, lines: &str) -> Result<(Network, TreeConfig), PrepError> {
        ingest_readers(buses.as_bytes(), "buses.csv", lines.as_bytes(), "lines.csv")
    }

    #[test]
    fn distances_become_failure_weights() {
        let lines = "line_id,from_bus,to_bus,status,resistance\n\
                     l1,s,a,tree,0.1\n\
                     l2,a,b,tree,0.1\n\
                     l3,s,b,switch,0.2\n";
        let (net, tree) = ingest(BUSES, lines).unwrap();
        assert_eq!(net.edge(EdgeId(0)).failure, 100.0);
        assert!((net.edge(EdgeId(2)).failure - 100.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(tree.switches(), [EdgeId(2)]);
        assert_eq!(net.vertex(VertexId(0)).class, VoltageClass::MV);
    }

    #[test]
    fn round_trip() {
        let lines = "line_id,from_bus,to_bus,status,resistance,failure_weight\n\
                     l1,s,a,tree,0.1,3\n\
                     l2,a,b,tree,0.1,\n\
                     l3,s,b,switch,0.2,\n";
        let (net, tree) = ingest(BUSES, lines).unwrap();
        assert_eq!(net.edge(EdgeId(0)).failure, 3.0);
        let (b, l) = write_csv(&net, &tree);
        let (net2, tree2) = ingest(&b, &l).unwrap();
        assert_eq!(net, net2);
        assert_eq!(tree, tree2);
    }

    #[test]
    fn diagnostics() {
        let unknown = "line_id,from_bus,to_bus,status,resistance\nl1,s,zz,tree,1\n";
        match ingest(BUSES, unknown) {
            Err(PrepError::Parse { row, column, .. }) => {
                assert_eq!((row, column.as_str()), (2, "to_bus"))
            }
            other => panic!("{other:?}"),
        }
        let bad_number =
            "line_id,from_bus,to_bus,status,resistance\nl1,s,a,tree,1\nl2,a,b,tree,oops\n";
        match ingest(BUSES, bad_number) {
            Err(PrepError::Parse { row, column, .. }) => {
                assert_eq!((row, column.as_str()), (3, "resistance"))
            }
            other => panic!("{other:?}"),
        }
        let dup = "line_id,from_bus,to_bus,status,resistance\nl1,s,a,tree,1\nl2,a,s,switch,1\n";
        assert_eq!(
            ingest(BUSES, dup).unwrap_err(),
            PrepError::DuplicateEdge("l2".into())
        );
        let split = "line_id,from_bus,to_bus,status,resistance\nl1,s,a,tree,1\n";
        assert_eq!(
            ingest(BUSES, split).unwrap_err(),
            PrepError::DisconnectedInput
        );
        let rootless = BUSES.replace(",MV,1", ",MV,0");
        let lines = "line_id,from_bus,to_bus,status,resistance\nl1,s,a,tree,1\nl2,a,b,tree,1\n";
        assert_eq!(
            ingest(&rootless, lines).unwrap_err(),
            PrepError::MissingRoot
        );
    }
}
