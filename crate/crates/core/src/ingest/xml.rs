use std::fmt::Write as _;

use roxmltree::{Document, Node};

use super::{
    parse_level, parse_year, required, split_citation_names, trimmed, DegreeEntry, ParseError,
    ResearcherRecord, SupervisionEntry,
};

pub(super) fn parse(document: &[u8]) -> Result<ResearcherRecord, ParseError> {
    let text = std::str::from_utf8(document)
        .map_err(|e| ParseError::MalformedDocument(format!("invalid UTF-8: {e}")))?;
    let doc = Document::parse(text).map_err(|e| ParseError::MalformedDocument(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "curriculum" {
        return Err(ParseError::MalformedDocument(format!(
            "expected <curriculum> root element, found <{}>",
            root.tag_name().name()
        )));
    }

    let id = required(root.attribute("id"), "id")?;
    let full_name = required(child_text(root, "name").as_deref(), "name")?;

    let citation_names = child_text(root, "citation-names")
        .map(|raw| split_citation_names(&raw))
        .unwrap_or_default();

    let degrees = children(root, "degrees")
        .flat_map(|list| children(list, "degree"))
        .map(parse_degree)
        .collect::<Result<Vec<_>, _>>()?;

    let supervisions_given = children(root, "supervisions")
        .flat_map(|list| children(list, "supervision"))
        .map(parse_supervision)
        .collect::<Result<Vec<_>, _>>()?;

    Ok(ResearcherRecord {
        id,
        full_name,
        citation_names,
        institution: trimmed(child_text(root, "institution").as_deref()),
        areas: areas(root),
        degrees,
        supervisions_given,
        resume: trimmed(child_text(root, "resume").as_deref()),
    })
}

fn parse_degree(node: Node) -> Result<DegreeEntry, ParseError> {
    let level = parse_level(node.attribute("level"), "degree/level")?;
    let year_raw = required(node.attribute("year"), "degree/year")?;
    Ok(DegreeEntry {
        level,
        year: parse_year(&year_raw, "degree/year")?,
        thesis_title: trimmed(child_text(node, "thesis").as_deref()),
        supervisor_name: trimmed(child_text(node, "supervisor").as_deref()).unwrap_or_default(),
        institution: trimmed(child_text(node, "institution").as_deref()),
        areas: areas(node),
    })
}

fn parse_supervision(node: Node) -> Result<SupervisionEntry, ParseError> {
    let level = parse_level(node.attribute("level"), "supervision/level")?;
    let year_raw = required(node.attribute("year"), "supervision/year")?;
    Ok(SupervisionEntry {
        level,
        year: parse_year(&year_raw, "supervision/year")?,
        supervisee_name: required(child_text(node, "supervisee").as_deref(), "supervision/supervisee")?,
    })
}

fn areas(node: Node) -> Vec<String> {
    children(node, "areas")
        .flat_map(|list| children(list, "area"))
        .filter_map(|area| trimmed(Some(&text_of(area))))
        .collect()
}

fn children<'a, 'input: 'a>(
    node: Node<'a, 'input>,
    name: &'static str,
) -> impl Iterator<Item = Node<'a, 'input>> + 'a {
    node.children()
        .filter(move |c| c.is_element() && c.tag_name().name() == name)
}

fn child_text(node: Node, name: &'static str) -> Option<String> {
    children(node, name).next().map(text_of)
}

fn text_of(node: Node) -> String {
    node.descendants()
        .filter(|n| n.is_text())
        .filter_map(|n| n.text())
        .collect()
}

/// Serialize a record into the corpus XML schema. Parsing the output yields
/// the same record for any record that came out of the parser.
pub fn to_xml(record: &ResearcherRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "<curriculum id=\"{}\">", escape(&record.id));
    let _ = writeln!(out, "  <name>{}</name>", escape(&record.full_name));
    if !record.citation_names.is_empty() {
        let _ = writeln!(
            out,
            "  <citation-names>{}</citation-names>",
            escape(&record.citation_names.join("; "))
        );
    }
    if let Some(institution) = &record.institution {
        let _ = writeln!(out, "  <institution>{}</institution>", escape(institution));
    }
    write_areas(&mut out, &record.areas, "  ");
    if !record.degrees.is_empty() {
        out.push_str("  <degrees>\n");
        for degree in &record.degrees {
            let _ = writeln!(
                out,
                "    <degree level=\"{}\" year=\"{}\">",
                degree.level.as_str(),
                degree.year
            );
            if let Some(thesis) = &degree.thesis_title {
                let _ = writeln!(out, "      <thesis>{}</thesis>", escape(thesis));
            }
            if !degree.supervisor_name.is_empty() {
                let _ = writeln!(
                    out,
                    "      <supervisor>{}</supervisor>",
                    escape(&degree.supervisor_name)
                );
            }
            if let Some(institution) = &degree.institution {
                let _ = writeln!(out, "      <institution>{}</institution>", escape(institution));
            }
            write_areas(&mut out, &degree.areas, "      ");
            out.push_str("    </degree>\n");
        }
        out.push_str("  </degrees>\n");
    }
    if !record.supervisions_given.is_empty() {
        out.push_str("  <supervisions>\n");
        for supervision in &record.supervisions_given {
            let _ = writeln!(
                out,
                "    <supervision level=\"{}\" year=\"{}\"><supervisee>{}</supervisee></supervision>",
                supervision.level.as_str(),
                supervision.year,
                escape(&supervision.supervisee_name)
            );
        }
        out.push_str("  </supervisions>\n");
    }
    if let Some(resume) = &record.resume {
        let _ = writeln!(out, "  <resume>{}</resume>", escape(resume));
    }
    out.push_str("</curriculum>\n");
    out
}

fn write_areas(out: &mut String, areas: &[String], indent: &str) {
    if areas.is_empty() {
        return;
    }
    let _ = write!(out, "{indent}<areas>");
    for area in areas {
        let _ = write!(out, "<area>{}</area>", escape(area));
    }
    out.push_str("</areas>\n");
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}
