use std::fs;
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use scitree_core::ingest::{
    load_corpus, parse_curriculum, to_jsonl_row, to_xml, CorpusError, DegreeEntry, DegreeLevel,
    DocumentFormat, Level, ParseError, ResearcherRecord, SupervisionEntry,
};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn minimal_document_has_empty_lists() {
    let doc = br#"<curriculum id="R1"><name> Ana Souza </name></curriculum>"#;
    let record = parse_curriculum(doc, DocumentFormat::Xml).unwrap();
    assert_eq!(record, ResearcherRecord::new("R1", "Ana Souza"));

    let row = br#"{"id":"R1","name":"Ana Souza"}"#;
    assert_eq!(parse_curriculum(row, DocumentFormat::JsonlRow).unwrap(), record);
}

#[test]
fn fixture_fields_are_verbatim() {
    let bytes = fs::read(fixtures().join("pavan.xml")).unwrap();
    let record = parse_curriculum(&bytes, DocumentFormat::Xml).unwrap();
    assert_eq!(record.id, "K4780217P3");
    assert_eq!(record.full_name, "Crodowaldo Pavan");
    assert_eq!(record.citation_names, ["PAVAN, C.", "PAVAN, CRODOWALDO"]);
    assert_eq!(record.institution.as_deref(), Some("Universidade de São Paulo"));
    assert_eq!(record.areas, ["Genética"]);
    assert_eq!(
        record.degrees,
        [DegreeEntry {
            level: DegreeLevel::Phd,
            year: 1944,
            thesis_title: Some("Os peixes cegos das cavernas de Iporanga e a evolução".into()),
            supervisor_name: "A. Dreyfus".into(),
            institution: Some("Universidade de São Paulo".into()),
            areas: vec![],
        }]
    );
    assert_eq!(
        record.supervisions_given,
        [SupervisionEntry {
            level: Level::Phd,
            year: 1955,
            supervisee_name: "Helena Marques Tavares".into(),
        }]
    );
    assert!(record.resume.is_some());
}

#[test]
fn xml_and_jsonl_fixtures_agree() {
    let xml = parse_curriculum(&fs::read(fixtures().join("pavan.xml")).unwrap(), DocumentFormat::Xml).unwrap();
    let json = parse_curriculum(
        fs::read_to_string(fixtures().join("pavan.jsonl")).unwrap().trim().as_bytes(),
        DocumentFormat::JsonlRow,
    )
    .unwrap();
    assert_eq!(xml, json);
}

#[test]
fn truncated_document_is_malformed() {
    let bytes = fs::read(fixtures().join("pavan.xml")).unwrap();
    let truncated = &bytes[..bytes.len() / 2];
    assert!(matches!(
        parse_curriculum(truncated, DocumentFormat::Xml),
        Err(ParseError::MalformedDocument(_))
    ));
    let row = fs::read(fixtures().join("pavan.jsonl")).unwrap();
    assert!(matches!(
        parse_curriculum(&row[..row.len() / 2], DocumentFormat::JsonlRow),
        Err(ParseError::MalformedDocument(_))
    ));
}

#[test]
fn required_fields_and_years() {
    let cases: &[(&[u8], DocumentFormat)] = &[
        (b"<curriculum><name>X</name></curriculum>", DocumentFormat::Xml),
        (b"<curriculum id=\"1\"></curriculum>", DocumentFormat::Xml),
        (b"<curriculum id=\" \"><name>X</name></curriculum>", DocumentFormat::Xml),
        (br#"{"name":"X"}"#, DocumentFormat::JsonlRow),
        (br#"{"id":"1","name":"  "}"#, DocumentFormat::JsonlRow),
    ];
    for (doc, format) in cases {
        assert!(
            matches!(parse_curriculum(doc, *format), Err(ParseError::MissingRequiredField(_))),
            "{}",
            String::from_utf8_lossy(doc)
        );
    }

    let bad_years: &[(&[u8], DocumentFormat)] = &[
        (
            b"<curriculum id=\"1\"><name>X</name><degrees><degree level=\"PHD\" year=\"19x\"/></degrees></curriculum>",
            DocumentFormat::Xml,
        ),
        (
            b"<curriculum id=\"1\"><name>X</name><supervisions><supervision level=\"MSC\" year=\"1850\"><supervisee>Y</supervisee></supervision></supervisions></curriculum>",
            DocumentFormat::Xml,
        ),
        (
            br#"{"id":"1","name":"X","degrees":[{"level":"PHD","year":1999.5}]}"#,
            DocumentFormat::JsonlRow,
        ),
        (
            br#"{"id":"1","name":"X","supervisions":[{"level":"PHD","year":3000,"supervisee":"Y"}]}"#,
            DocumentFormat::JsonlRow,
        ),
    ];
    for (doc, format) in bad_years {
        assert!(
            matches!(parse_curriculum(doc, *format), Err(ParseError::InvalidYear { .. })),
            "{}",
            String::from_utf8_lossy(doc)
        );
    }
}

#[test]
fn supervision_without_supervisee_is_rejected() {
    let doc = b"<curriculum id=\"1\"><name>X</name><supervisions><supervision level=\"PHD\" year=\"2000\"/></supervisions></curriculum>";
    assert!(matches!(
        parse_curriculum(doc, DocumentFormat::Xml),
        Err(ParseError::MissingRequiredField(f)) if f == "supervision/supervisee"
    ));
    let doc = b"<curriculum id=\"1\"><name>X</name><supervisions><supervision level=\"OTHER\" year=\"2000\"><supervisee>Y</supervisee></supervision></supervisions></curriculum>";
    assert!(matches!(
        parse_curriculum(doc, DocumentFormat::Xml),
        Err(ParseError::MalformedDocument(_))
    ));
}

fn write(dir: &Path, name: &str, contents: &str) {
    fs::write(dir.join(name), contents).unwrap();
}

fn xml_doc(id: &str, name: &str) -> String {
    format!("<curriculum id=\"{id}\"><name>{name}</name></curriculum>")
}

#[test]
fn corpus_of_three_is_sorted_by_id() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.xml", &xml_doc("Z9", "Zeca"));
    write(dir.path(), "b.xml", &xml_doc("A1", "Ana"));
    write(dir.path(), "c.jsonl", "{\"id\":\"M5\",\"name\":\"Mara\"}\n");
    let (corpus, report) = load_corpus(dir.path()).unwrap();
    let ids: Vec<_> = corpus.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["A1", "M5", "Z9"]);
    assert_eq!(report.records_loaded, 3);
    assert!(report.failures.is_empty());
}

#[test]
fn duplicate_id_names_both_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "first.xml", &xml_doc("X1", "Ana"));
    write(dir.path(), "second.xml", &xml_doc("X1", "Bia"));
    match load_corpus(dir.path()) {
        Err(CorpusError::DuplicateId { id, first, second }) => {
            assert_eq!(id, "X1");
            assert_eq!((first.as_str(), second.as_str()), ("first.xml", "second.xml"));
        }
        other => panic!("expected DuplicateId, got {other:?}"),
    }
}

#[test]
fn empty_directory_is_an_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load_corpus(dir.path()), Err(CorpusError::EmptyCorpus)));
    write(dir.path(), "broken.xml", "<curriculum id=\"1\">");
    assert!(matches!(load_corpus(dir.path()), Err(CorpusError::EmptyCorpus)));
}

#[test]
fn bad_files_are_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "good.xml", &xml_doc("G", "Good One"));
    write(dir.path(), "bad.xml", "<curriculum id=\"B\"><name>Bad");
    write(dir.path(), "rows.jsonl", "{\"id\":\"R\",\"name\":\"Row\"}\n\n{\"name\":\"no id\"}\n");
    write(dir.path(), "notes.txt", "ignored");
    let (corpus, report) = load_corpus(dir.path()).unwrap();
    assert_eq!(corpus.len(), 2);
    let sources: Vec<_> = report.failures.iter().map(|f| f.source.as_str()).collect();
    assert_eq!(sources, ["bad.xml", "rows.jsonl:3"]);
    assert_eq!(report.skipped, ["notes.txt"]);
}

#[test]
fn load_order_does_not_depend_on_file_names() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let docs = [("K3", "Caio"), ("K1", "Ana"), ("K2", "Bia")];
    for (i, (id, name)) in docs.iter().enumerate() {
        write(a.path(), &format!("{i}.xml"), &xml_doc(id, name));
        write(b.path(), &format!("{}.xml", 9 - i), &xml_doc(id, name));
    }
    assert_eq!(load_corpus(a.path()).unwrap().0, load_corpus(b.path()).unwrap().0);
}

#[test]
fn fixture_corpus_loads_from_both_formats() {
    let (corpus, report) = load_corpus(&fixtures().join("pavan_corpus")).unwrap();
    assert_eq!(corpus.len(), 12);
    assert_eq!(report.files_read, 9);
    assert!(report.failures.is_empty());
}

fn text() -> impl Strategy<Value = String> {
    "[A-Za-zÀ-ÿ0-9&<>\"' ,.-]{0,12}[A-Za-zÀ-ÿ0-9&<>]"
        .prop_map(|s| s.trim().to_owned())
        .prop_filter("non-empty", |s| !s.is_empty())
}

fn year() -> impl Strategy<Value = i32> {
    1900..2020i32
}

fn record() -> impl Strategy<Value = ResearcherRecord> {
    let degree = (
        prop_oneof![Just(DegreeLevel::Msc), Just(DegreeLevel::Phd), Just(DegreeLevel::Other)],
        year(),
        prop::option::of(text()),
        prop::option::of(text()),
        prop::option::of(text()),
        prop::collection::vec(text(), 0..2),
    )
        .prop_map(|(level, year, thesis_title, supervisor, institution, areas)| DegreeEntry {
            level,
            year,
            thesis_title,
            supervisor_name: supervisor.unwrap_or_default(),
            institution,
            areas,
        });
    let supervision = (prop_oneof![Just(Level::Msc), Just(Level::Phd)], year(), text())
        .prop_map(|(level, year, supervisee_name)| SupervisionEntry {
            level,
            year,
            supervisee_name,
        });
    (
        "[A-Z0-9]{1,10}",
        text(),
        prop::collection::vec(text(), 0..3),
        prop::option::of(text()),
        prop::collection::vec(text(), 0..3),
        prop::collection::vec(degree, 0..3),
        prop::collection::vec(supervision, 0..4),
        prop::option::of(text()),
    )
        .prop_map(
            |(id, full_name, citation_names, institution, areas, degrees, supervisions_given, resume)| {
                ResearcherRecord {
                    id,
                    full_name,
                    citation_names,
                    institution,
                    areas,
                    degrees,
                    supervisions_given,
                    resume,
                }
            },
        )
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(record in record()) {
        let xml = to_xml(&record);
        prop_assert_eq!(&parse_curriculum(xml.as_bytes(), DocumentFormat::Xml).unwrap(), &record);
        let row = to_jsonl_row(&record);
        prop_assert_eq!(&parse_curriculum(row.as_bytes(), DocumentFormat::JsonlRow).unwrap(), &record);
    }
}
