use std::collections::HashMap;

use super::{Instance, Matching};
use crate::error::{InstanceError, MatchingError, ParseError, ParseErrorKind};
use crate::Vertex;

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header<'a>(line: Option<(usize, &'a str)>, key: &'static str) -> Result<(usize, Vec<&'a str>), ParseError> {
    let (no, text) = line.ok_or_else(|| ParseError::new(0, ParseErrorKind::MissingHeader(key)))?;
    let rest = text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| ParseError::new(no, ParseErrorKind::MissingHeader(key)))?;
    Ok((no, rest.split_whitespace().collect()))
}

/// Parses the line-oriented instance format:
///
/// ```text
/// # comment
/// agents: a0 a1
/// jobs: b0 b1
/// a0 > b1
/// a1 > b1 b0
/// b0 > a1
/// b1 > a1 a0
/// ```
///
/// A vertex without a `name > ...` line has an empty list.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = content_lines(text);
    let (agents_line, agents) = header(lines.next(), "agents")?;
    let (jobs_line, jobs) = header(lines.next(), "jobs")?;

    let mut index: HashMap<&str, Vertex> = HashMap::new();
    for (i, &name) in agents.iter().chain(jobs.iter()).enumerate() {
        if index.insert(name, i).is_some() {
            let no = if i < agents.len() { agents_line } else { jobs_line };
            return Err(ParseError::new(no, InstanceError::DuplicateName(name.to_string())));
        }
    }

    let n = agents.len() + jobs.len();
    let mut prefs: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut line_of: Vec<Option<usize>> = vec![None; n];
    for (no, text) in lines {
        let (owner, rest) = text.split_once('>').ok_or_else(|| {
            ParseError::new(no, ParseErrorKind::Malformed(format!("expected `name > ...`, got `{text}`")))
        })?;
        let owner = owner.trim();
        if owner.is_empty() || owner.contains(char::is_whitespace) {
            return Err(ParseError::new(no, ParseErrorKind::Malformed(format!("bad vertex name `{owner}`"))));
        }
        let u = *index.get(owner).ok_or_else(|| ParseError::new(no, InstanceError::UnknownName(owner.to_string())))?;
        if line_of[u].is_some() {
            return Err(ParseError::new(no, ParseErrorKind::DuplicateList(owner.to_string())));
        }
        line_of[u] = Some(no);
        prefs[u] = rest
            .split_whitespace()
            .map(|v| {
                index.get(v).copied().ok_or_else(|| ParseError::new(no, InstanceError::UnknownName(v.to_string())))
            })
            .collect::<Result<_, _>>()?;
    }

    let agent_names = agents.iter().map(|s| s.to_string()).collect();
    let job_names = jobs.iter().map(|s| s.to_string()).collect();
    Instance::new(agent_names, job_names, prefs).map_err(|err| {
        let owner = match &err {
            InstanceError::SameSide(u, _)
            | InstanceError::DuplicateNeighbor(u, _)
            | InstanceError::Asymmetric(u, _)
            | InstanceError::EmptyAgent(u) => index.get(u.as_str()).copied(),
            _ => None,
        };
        let no = owner.and_then(|u| line_of[u]).unwrap_or(agents_line);
        ParseError::new(no, err)
    })
}

/// Parses a matching file: one `agent job` pair per line, `#` comments allowed.
/// Vertices that do not appear are self-matched.
pub fn parse_matching(inst: &Instance, text: &str) -> Result<Matching, ParseError> {
    let mut partner: Vec<Vertex> = inst.vertices().collect();
    for (no, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = tokens[..] else {
            return Err(ParseError::new(no, ParseErrorKind::Malformed(format!("expected `agent job`, got `{line}`"))));
        };
        let lookup = |s: &str| inst.id(s).ok_or_else(|| ParseError::new(no, MatchingError::UnknownName(s.to_string())));
        let (u, v) = (lookup(a)?, lookup(b)?);
        if inst.edge_between(u, v).is_none() || inst.is_agent(u) == inst.is_agent(v) {
            return Err(ParseError::new(no, MatchingError::NotAnEdge(a.to_string(), b.to_string())));
        }
        for (x, name) in [(u, a), (v, b)] {
            if partner[x] != x {
                return Err(ParseError::new(no, MatchingError::MatchedTwice(name.to_string())));
            }
        }
        partner[u] = v;
        partner[v] = u;
    }
    Ok(Matching::from_partners(partner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ParseErrorKind as K;

    const INST1: &str = "# four vertices\nagents: a0 a1\njobs: b0 b1\na0 > b1\na1 > b1 b0\nb0 > a1\nb1 > a1 a0\n";

    #[test]
    fn parses_small_instance() {
        let g = parse_instance(INST1).unwrap();
        assert_eq!((g.n(), g.m()), (4, 3));
        assert_eq!(g.prefs(1), &[3, 2]);
        let single = parse_instance("agents: a\njobs: b\na > b\nb > a\n").unwrap();
        assert_eq!((single.n(), single.m()), (2, 1));
    }

    #[test]
    fn errors_name_the_line() {
        let asym = parse_instance("agents: a\njobs: b\na > b\nb >\n").unwrap_err();
        assert_eq!(asym.line, 3);
        assert!(matches!(asym.kind, K::Instance(InstanceError::Asymmetric(..))));

        let unknown = parse_instance("agents: a\njobs: b\n\na > c\n").unwrap_err();
        assert_eq!(unknown, ParseError::new(4, InstanceError::UnknownName("c".into())));

        let dup = parse_instance("agents: a b\njobs: b\n").unwrap_err();
        assert_eq!(dup, ParseError::new(2, InstanceError::DuplicateName("b".into())));

        let empty = parse_instance("agents: a\njobs: b\n").unwrap_err();
        assert_eq!(empty, ParseError::new(1, InstanceError::EmptyAgent("a".into())));

        let missing = parse_instance("jobs: b\n").unwrap_err();
        assert_eq!(missing.kind, K::MissingHeader("agents"));

        let garbled = parse_instance("agents: a\njobs: b\na b\n").unwrap_err();
        assert_eq!(garbled.line, 3);

        let twice = parse_instance("agents: a\njobs: b\na > b\na > b\nb > a\n").unwrap_err();
        assert_eq!(twice, ParseError::new(4, K::DuplicateList("a".into())));
    }

    #[test]
    fn parses_matchings() {
        let g = parse_instance(INST1).unwrap();
        let m = parse_matching(&g, "a0 b1\n# c\na1 b0\n").unwrap();
        assert_eq!(m.size(), 2);
        let partial = parse_matching(&g, "a1 b1").unwrap();
        assert_eq!(partial.partner(0), 0);

        let bad = parse_matching(&g, "a0 b1\na0 b0\n").unwrap_err();
        assert_eq!(bad.line, 2);
        let non_edge = parse_matching(&g, "a0 b0\n").unwrap_err();
        assert!(matches!(non_edge.kind, K::Matching(MatchingError::NotAnEdge(..))));
        let twice = parse_matching(&g, "a0 b1\na1 b1\n").unwrap_err();
        assert_eq!(twice, ParseError::new(2, MatchingError::MatchedTwice("b1".into())));
    }
}
