use super::{content_lines, syntax, ParseError};
use crate::graph::NetworkGraph;

fn vertex_header(line: &str) -> Option<&str> {
    let rest = line.trim().strip_prefix('#')?.trim_start();
    rest.strip_prefix("vertices").map(str::trim)
}

/// Edge list: one `i j` pair per line, 0-based. A `# vertices N` comment
/// fixes the vertex count (needed for isolated vertices); otherwise it is
/// one more than the largest index. Other `#` comments are ignored.
pub fn parse_edge_list(text: &str) -> Result<NetworkGraph, ParseError> {
    let mut declared = None;
    for (k, line) in text.lines().enumerate() {
        if let Some(value) = vertex_header(line) {
            let n = value
                .parse::<usize>()
                .map_err(|_| syntax(k + 1, format!("bad vertex count {value:?}")))?;
            if declared.replace(n).is_some() {
                return Err(syntax(k + 1, "vertex count declared twice"));
            }
        }
    }
    let mut edges = Vec::new();
    for (line, body) in content_lines(text, '#') {
        let t: Vec<&str> = body.split_whitespace().collect();
        if t.len() != 2 {
            return Err(syntax(line, "expected 'i j'"));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| syntax(line, format!("bad vertex {s:?}")))
        };
        edges.push((parse(t[0])?, parse(t[1])?));
    }
    let inferred = edges.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0);
    let n = declared.unwrap_or(inferred);
    Ok(NetworkGraph::new(n, &edges)?)
}

/// Writes the `# vertices N` header followed by the edges in stored order.
pub fn format_edge_list(g: &NetworkGraph) -> String {
    let mut out = format!("# vertices {}\n", g.vertex_count());
    for &(i, j) in g.edges() {
        out += &format!("{i} {j}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphError, Topology};
    use proptest::prelude::*;

    #[test]
    fn header_and_inference() {
        let g = parse_edge_list("# a triangle\n0 1\n1 2  # closing edge next\n2 0\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges().len(), 3);
        let lone = parse_edge_list("# vertices 1\n").unwrap();
        assert_eq!((lone.vertex_count(), lone.edges().len()), (1, 0));
        let padded = parse_edge_list("#vertices 4\n0 1\n").unwrap();
        assert_eq!(padded.vertex_count(), 4);
    }

    #[test]
    fn rejects_bad_lists() {
        assert!(matches!(
            parse_edge_list("0 1\n1 0\n"),
            Err(ParseError::Graph(GraphError::DuplicateEdge { .. }))
        ));
        assert!(matches!(parse_edge_list("1 1\n"), Err(ParseError::Graph(GraphError::SelfLoop { .. }))));
        assert!(matches!(
            parse_edge_list("# vertices 2\n0 2\n"),
            Err(ParseError::Graph(GraphError::VertexOutOfRange { .. }))
        ));
        assert!(parse_edge_list("0 1 2\n").is_err());
        assert!(parse_edge_list("0 -1\n").is_err());
        assert!(parse_edge_list("# vertices x\n").is_err());
    }

    proptest! {
        #[test]
        fn generated_graphs_round_trip(
            topology in prop::sample::select(Topology::ALL.to_vec()),
            n in 1usize..15,
            seed in any::<u64>(),
        ) {
            let g = if n == 1 { NetworkGraph::new(1, &[]).unwrap() } else { generate(topology, n, seed).unwrap() };
            prop_assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
        }
    }
}
