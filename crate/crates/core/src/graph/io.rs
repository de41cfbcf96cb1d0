//! GEXF 1.2, GraphML and edge-CSV exchange.
//!
//! Writers prepend caller-supplied metadata lines as comments (`#` for CSV,
//! `<!-- -->` for XML). Weights are printed with the shortest representation
//! that parses back to the same `f64`.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use quick_xml::events::{BytesStart, Event};
use quick_xml::escape::{escape, unescape};
use quick_xml::Reader;

use super::{Graph, GraphError, Partition};

pub const COMMUNITY_ATTRIBUTE: &str = "community";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Gexf,
    GraphMl,
    EdgeCsv,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Gexf => "gexf",
            ExportFormat::GraphMl => "graphml",
            ExportFormat::EdgeCsv => "csv",
        }
    }

    /// Guess the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "gexf" => Some(ExportFormat::Gexf),
            "graphml" => Some(ExportFormat::GraphMl),
            "csv" => Some(ExportFormat::EdgeCsv),
            _ => None,
        }
    }
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gexf" => Ok(ExportFormat::Gexf),
            "graphml" => Ok(ExportFormat::GraphMl),
            "edge-csv" | "csv" => Ok(ExportFormat::EdgeCsv),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

/// Write `graph` to `path`; a partition is stored as the `community` node attribute.
pub fn export(
    graph: &Graph,
    partition: Option<&Partition>,
    format: ExportFormat,
    path: &Path,
    header: &[String],
) -> Result<(), GraphError> {
    let text = render(graph, partition, format, header);
    fs::write(path, text).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn render(
    graph: &Graph,
    partition: Option<&Partition>,
    format: ExportFormat,
    header: &[String],
) -> String {
    let attrs = node_attributes(graph, partition);
    match format {
        ExportFormat::Gexf => render_gexf(graph, &attrs, header),
        ExportFormat::GraphMl => render_graphml(graph, &attrs, header),
        ExportFormat::EdgeCsv => render_edge_csv(graph, header),
    }
}

pub fn import(path: &Path, format: ExportFormat) -> Result<Graph, GraphError> {
    let text = fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text, format)
}

pub fn parse(text: &str, format: ExportFormat) -> Result<Graph, GraphError> {
    match format {
        ExportFormat::Gexf => parse_gexf(text),
        ExportFormat::GraphMl => parse_graphml(text),
        ExportFormat::EdgeCsv => parse_edge_csv(text),
    }
}

/// Read the `community` attribute back into a partition, if every node has one.
pub fn partition_from_attribute(graph: &Graph) -> Option<Partition> {
    let mut pairs = Vec::with_capacity(graph.node_count());
    for i in 0..graph.node_count() {
        let c: usize = graph
            .node_data(i)
            .attributes
            .get(COMMUNITY_ATTRIBUTE)?
            .parse()
            .ok()?;
        pairs.push((graph.node_id(i).to_string(), c));
    }
    Some(Partition::from_labels(pairs))
}

type NodeAttrs = (Vec<String>, Vec<BTreeMap<String, String>>);

fn node_attributes(graph: &Graph, partition: Option<&Partition>) -> NodeAttrs {
    let mut keys = BTreeSet::new();
    let mut rows = Vec::with_capacity(graph.node_count());
    for i in 0..graph.node_count() {
        let mut attrs = graph.node_data(i).attributes.clone();
        if let Some(c) = partition.and_then(|p| p.community_of(graph.node_id(i))) {
            attrs.insert(COMMUNITY_ATTRIBUTE.to_string(), c.to_string());
        }
        keys.extend(attrs.keys().cloned());
        rows.push(attrs);
    }
    (keys.into_iter().collect(), rows)
}

fn xml_comment(s: &str) -> String {
    let mut body = s.replace("--", "- -");
    if body.ends_with('-') {
        body.push(' ');
    }
    format!("<!-- {body} -->\n")
}

fn render_gexf(graph: &Graph, (keys, rows): &NodeAttrs, header: &[String]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    for line in header {
        out.push_str(&xml_comment(line));
    }
    out.push_str("<gexf xmlns=\"http://gexf.net/1.2\" version=\"1.2\">\n");
    let kind = if graph.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(out, "  <graph mode=\"static\" defaultedgetype=\"{kind}\">");
    if !keys.is_empty() {
        out.push_str("    <attributes class=\"node\">\n");
        for (i, k) in keys.iter().enumerate() {
            let ty = if k == COMMUNITY_ATTRIBUTE { "integer" } else { "string" };
            let _ = writeln!(
                out,
                "      <attribute id=\"{i}\" title=\"{}\" type=\"{ty}\"/>",
                escape(k.as_str())
            );
        }
        out.push_str("    </attributes>\n");
    }
    out.push_str("    <nodes>\n");
    for (i, attrs) in rows.iter().enumerate() {
        let id = escape(graph.node_id(i));
        let label = escape(graph.node_data(i).label.as_str());
        if attrs.is_empty() {
            let _ = writeln!(out, "      <node id=\"{id}\" label=\"{label}\"/>");
            continue;
        }
        let _ = writeln!(out, "      <node id=\"{id}\" label=\"{label}\">");
        out.push_str("        <attvalues>\n");
        for (k, v) in attrs {
            let slot = keys.iter().position(|x| x == k).expect("key collected above");
            let _ = writeln!(
                out,
                "          <attvalue for=\"{slot}\" value=\"{}\"/>",
                escape(v.as_str())
            );
        }
        out.push_str("        </attvalues>\n      </node>\n");
    }
    out.push_str("    </nodes>\n    <edges>\n");
    for (n, (u, v, w)) in graph.edges().enumerate() {
        let _ = writeln!(
            out,
            "      <edge id=\"{n}\" source=\"{}\" target=\"{}\" weight=\"{w}\"/>",
            escape(u),
            escape(v)
        );
    }
    out.push_str("    </edges>\n  </graph>\n</gexf>\n");
    out
}

fn render_graphml(graph: &Graph, (keys, rows): &NodeAttrs, header: &[String]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    for line in header {
        out.push_str(&xml_comment(line));
    }
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    for (i, k) in keys.iter().enumerate() {
        let ty = if k == COMMUNITY_ATTRIBUTE { "int" } else { "string" };
        let _ = writeln!(
            out,
            "  <key id=\"n{i}\" for=\"node\" attr.name=\"{}\" attr.type=\"{ty}\"/>",
            escape(k.as_str())
        );
    }
    out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    let kind = if graph.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(out, "  <graph id=\"G\" edgedefault=\"{kind}\">");
    for (i, attrs) in rows.iter().enumerate() {
        let _ = writeln!(out, "    <node id=\"{}\">", escape(graph.node_id(i)));
        let _ = writeln!(
            out,
            "      <data key=\"label\">{}</data>",
            escape(graph.node_data(i).label.as_str())
        );
        for (k, v) in attrs {
            let slot = keys.iter().position(|x| x == k).expect("key collected above");
            let _ = writeln!(out, "      <data key=\"n{slot}\">{}</data>", escape(v.as_str()));
        }
        out.push_str("    </node>\n");
    }
    for (u, v, w) in graph.edges() {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{w}</data></edge>",
            escape(u),
            escape(v)
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn render_edge_csv(graph: &Graph, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# directed={}", graph.is_directed());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["source", "target", "weight"]).expect("in-memory write");
    for (u, v, weight) in graph.edges() {
        w.write_record([u, v, &weight.to_string()]).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input"));
    out
}

fn parse_err(format: &'static str, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        format,
        message: message.into(),
    }
}

fn attr_map(e: &BytesStart<'_>, format: &'static str) -> Result<HashMap<String, String>, GraphError> {
    let mut map = HashMap::new();
    for a in e.attributes() {
        let a = a.map_err(|err| parse_err(format, err.to_string()))?;
        let key = a.key.as_ref().to_string();
        let value = a
            .normalized_value(quick_xml::XmlVersion::Implicit1_0)
            .map_err(|err| parse_err(format, err.to_string()))?;
        map.insert(key, value.into_owned());
    }
    Ok(map)
}

fn required<'a>(
    map: &'a HashMap<String, String>,
    key: &str,
    format: &'static str,
) -> Result<&'a str, GraphError> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| parse_err(format, format!("missing `{key}` attribute")))
}

fn parse_weight(raw: Option<&str>, format: &'static str) -> Result<f64, GraphError> {
    match raw {
        None => Ok(1.0),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| parse_err(format, format!("bad weight `{s}`"))),
    }
}

fn parse_gexf(text: &str) -> Result<Graph, GraphError> {
    const F: &str = "gexf";
    let mut reader = Reader::from_str(text);
    let mut graph: Option<Graph> = None;
    let mut titles: HashMap<String, String> = HashMap::new();
    let mut attr_class_node = false;
    let mut current_node: Option<String> = None;
    loop {
        let event = reader
            .read_event()
            .map_err(|e| parse_err(F, format!("at byte {}: {e}", reader.buffer_position())))?;
        let (e, is_empty) = match &event {
            Event::Start(e) => (e, false),
            Event::Empty(e) => (e, true),
            Event::End(e) => {
                match e.name().as_ref() {
                    "node" => current_node = None,
                    "attributes" => attr_class_node = false,
                    _ => {}
                }
                continue;
            }
            Event::Eof => break,
            _ => continue,
        };
        let attrs = attr_map(e, F)?;
        match e.name().as_ref() {
            "graph" => {
                let directed = attrs.get("defaultedgetype").map(String::as_str) != Some("undirected");
                graph = Some(Graph::new(directed));
            }
            "attributes" => {
                attr_class_node = attrs.get("class").map(String::as_str) == Some("node");
            }
            "attribute" if attr_class_node => {
                titles.insert(
                    required(&attrs, "id", F)?.to_string(),
                    required(&attrs, "title", F)?.to_string(),
                );
            }
            "node" => {
                let g = graph.as_mut().ok_or_else(|| parse_err(F, "node outside graph"))?;
                let id = required(&attrs, "id", F)?;
                g.add_node(id);
                if let Some(label) = attrs.get("label") {
                    g.set_label(id, label);
                }
                if !is_empty {
                    current_node = Some(id.to_string());
                }
            }
            "attvalue" => {
                let g = graph.as_mut().ok_or_else(|| parse_err(F, "attvalue outside graph"))?;
                let node = current_node
                    .as_deref()
                    .ok_or_else(|| parse_err(F, "attvalue outside node"))?;
                let slot = required(&attrs, "for", F)?;
                let key = titles.get(slot).map(String::as_str).unwrap_or(slot);
                g.set_attribute(node, key, required(&attrs, "value", F)?);
            }
            "edge" => {
                let g = graph.as_mut().ok_or_else(|| parse_err(F, "edge outside graph"))?;
                let w = parse_weight(attrs.get("weight").map(String::as_str), F)?;
                g.add_edge(required(&attrs, "source", F)?, required(&attrs, "target", F)?, w)?;
            }
            _ => {}
        }
    }
    graph.ok_or_else(|| parse_err(F, "no <graph> element"))
}

fn parse_graphml(text: &str) -> Result<Graph, GraphError> {
    const F: &str = "graphml";
    let mut reader = Reader::from_str(text);
    let mut graph: Option<Graph> = None;
    let mut key_names: HashMap<String, String> = HashMap::new();
    let mut current_node: Option<String> = None;
    let mut current_edge: Option<(String, String)> = None;
    let mut edge_weight: Option<String> = None;
    let mut data_key: Option<String> = None;
    let mut data_text = String::new();
    loop {
        let event = reader
            .read_event()
            .map_err(|e| parse_err(F, format!("at byte {}: {e}", reader.buffer_position())))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let is_empty = matches!(event, Event::Empty(_));
                let attrs = attr_map(e, F)?;
                match e.name().as_ref() {
                    "key" => {
                        let id = required(&attrs, "id", F)?.to_string();
                        let name = attrs.get("attr.name").cloned().unwrap_or_else(|| id.clone());
                        key_names.insert(id, name);
                    }
                    "graph" => {
                        let directed = attrs.get("edgedefault").map(String::as_str) != Some("undirected");
                        graph = Some(Graph::new(directed));
                    }
                    "node" => {
                        let g = graph.as_mut().ok_or_else(|| parse_err(F, "node outside graph"))?;
                        let id = required(&attrs, "id", F)?;
                        g.add_node(id);
                        if !is_empty {
                            current_node = Some(id.to_string());
                        }
                    }
                    "edge" => {
                        let s = required(&attrs, "source", F)?.to_string();
                        let t = required(&attrs, "target", F)?.to_string();
                        if is_empty {
                            let g = graph.as_mut().ok_or_else(|| parse_err(F, "edge outside graph"))?;
                            g.add_edge(&s, &t, 1.0)?;
                        } else {
                            current_edge = Some((s, t));
                            edge_weight = None;
                        }
                    }
                    "data" => {
                        data_key = Some(required(&attrs, "key", F)?.to_string());
                        data_text.clear();
                    }
                    _ => {}
                }
            }
            Event::Text(t) => {
                if data_key.is_some() {
                    data_text.push_str(&t.xml10_content());
                }
            }
            Event::GeneralRef(r) => {
                if data_key.is_some() {
                    let raw = format!("&{};", r.xml10_content());
                    let resolved = unescape(&raw).map_err(|e| parse_err(F, e.to_string()))?;
                    data_text.push_str(&resolved);
                }
            }
            Event::End(e) => match e.name().as_ref() {
                "data" => {
                    let key = data_key.take().unwrap_or_default();
                    let name = key_names.get(&key).cloned().unwrap_or(key);
                    if let Some(node) = &current_node {
                        let g = graph.as_mut().ok_or_else(|| parse_err(F, "data outside graph"))?;
                        if name == "label" {
                            g.set_label(node, &data_text);
                        } else {
                            g.set_attribute(node, &name, &data_text);
                        }
                    } else if current_edge.is_some() && name == "weight" {
                        edge_weight = Some(data_text.clone());
                    }
                }
                "node" => current_node = None,
                "edge" => {
                    if let Some((s, t)) = current_edge.take() {
                        let g = graph.as_mut().ok_or_else(|| parse_err(F, "edge outside graph"))?;
                        let w = parse_weight(edge_weight.as_deref(), F)?;
                        g.add_edge(&s, &t, w)?;
                    }
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    graph.ok_or_else(|| parse_err(F, "no <graph> element"))
}

fn parse_edge_csv(text: &str) -> Result<Graph, GraphError> {
    const F: &str = "edge-csv";
    let mut directed = false;
    let mut body = String::with_capacity(text.len());
    for line in text.lines() {
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(flag) = comment.trim().strip_prefix("directed=") {
                directed = flag.trim() == "true";
            }
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let mut graph = Graph::new(directed);
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    for (n, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(F, e.to_string()))?;
        let field = |i: usize| -> Result<Cow<'_, str>, GraphError> {
            record
                .get(i)
                .map(Cow::Borrowed)
                .ok_or_else(|| parse_err(F, format!("row {} has too few fields", n + 2)))
        };
        let w = parse_weight(record.get(2), F)?;
        graph.add_edge(&field(0)?, &field(1)?, w)?;
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample() -> Graph {
        let mut g = Graph::directed();
        g.add_edge("a", "b", 1.0).unwrap();
        g.add_edge("b", "c&d", 0.1 + 0.2).unwrap();
        g.add_node("lone");
        g.set_label("a", "Urban <growth> \"models\"");
        g.set_attribute("b", "year", "2004");
        g
    }

    #[test]
    fn gexf_two_nodes_one_edge() {
        let mut g = Graph::undirected();
        g.add_edge("x", "y", 2.0).unwrap();
        let text = render(&g, None, ExportFormat::Gexf, &[]);
        assert_eq!(text.matches("<node ").count(), 2);
        assert_eq!(text.matches("<edge ").count(), 1);
        assert!(text.contains("defaultedgetype=\"undirected\""));
    }

    #[test]
    fn partition_becomes_community_attribute() {
        let g = sample();
        let p = Partition::from_labels(g.node_ids().iter().enumerate().map(|(i, n)| (n.clone(), i % 2)));
        for format in [ExportFormat::Gexf, ExportFormat::GraphMl] {
            let back = parse(&render(&g, Some(&p), format, &[]), format).unwrap();
            for i in 0..back.node_count() {
                assert!(back.node_data(i).attributes.contains_key(COMMUNITY_ATTRIBUTE));
            }
            assert_eq!(partition_from_attribute(&back), Some(p.clone()));
        }
    }

    #[test]
    fn xml_round_trip_preserves_everything() {
        let g = sample();
        let header = vec!["tool scholnet".to_string(), "odd -- comment-".to_string()];
        for format in [ExportFormat::Gexf, ExportFormat::GraphMl] {
            let back = parse(&render(&g, None, format, &header), format).unwrap();
            assert_eq!(back, g, "{format:?}");
        }
    }

    #[test]
    fn csv_round_trip_keeps_edges_and_direction() {
        let g = sample();
        let back = parse(&render(&g, None, ExportFormat::EdgeCsv, &["h".into()]), ExportFormat::EdgeCsv).unwrap();
        assert!(back.is_directed());
        assert_eq!(back.edge_count(), g.edge_count());
        assert_eq!(back.edge_weight("b", "c&d"), Some(0.1 + 0.2));
    }

    #[test]
    fn export_to_unwritable_path_fails() {
        let g = sample();
        let err = export(&g, None, ExportFormat::Gexf, Path::new("/nonexistent/dir/g.gexf"), &[]);
        assert!(matches!(err, Err(GraphError::Io { .. })));
    }

    #[test]
    fn random_thousand_node_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut g = Graph::undirected();
        for i in 0..1000 {
            g.add_node(&format!("n{i}"));
        }
        for _ in 0..3000 {
            let u = rng.random_range(0..1000);
            let v = rng.random_range(0..1000);
            if u != v {
                g.add_edge(&format!("n{u}"), &format!("n{v}"), rng.random_range(0.001..10.0))
                    .unwrap();
            }
        }
        let canon = |g: &Graph| {
            let mut es: Vec<(String, String, f64)> = g
                .edges()
                .map(|(u, v, w)| {
                    let (u, v) = if u < v { (u, v) } else { (v, u) };
                    (u.to_string(), v.to_string(), w)
                })
                .collect();
            es.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
            es
        };
        for format in [ExportFormat::Gexf, ExportFormat::GraphMl, ExportFormat::EdgeCsv] {
            let back = parse(&render(&g, None, format, &[]), format).unwrap();
            let (a, b) = (canon(&g), canon(&back));
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert_eq!((&x.0, &x.1), (&y.0, &y.1));
                assert!((x.2 - y.2).abs() <= 1e-9);
            }
        }
    }
}
