//! Shards written by an independent WARC library must read back exactly.

use std::io::{BufReader, Cursor, Write};

use chrono::{DateTime, TimeZone, Utc};
use mathcrawl_core::warc::{decode_bytes, decode_html, open_shard, ArchiveRecord, ShardReader};
use proptest::prelude::*;
use warc::{RecordBuilder, RecordType, WarcHeader, WarcReader, WarcWriter};

#[derive(Debug, Clone)]
enum Kind {
    Html,
    Pdf,
    Request,
    Metadata,
}

#[derive(Debug, Clone)]
struct Planned {
    kind: Kind,
    path: String,
    secs: i64,
    body: String,
}

fn date(secs: i64) -> DateTime<Utc> {
    Utc.timestamp_opt(1_600_000_000 + secs, 0).unwrap()
}

fn url(plan: &Planned) -> String {
    format!("https://example.org/{}", plan.path)
}

fn http_block(content_type: &str, body: &str) -> Vec<u8> {
    format!(
        "HTTP/1.1 200 OK\r\nContent-Type: {content_type}\r\nContent-Length: {}\r\n\r\n{body}",
        body.len()
    )
    .into_bytes()
}

fn write_record<W: Write>(writer: &mut WarcWriter<W>, plan: &Planned) {
    let (warc_type, block) = match plan.kind {
        Kind::Html => (RecordType::Response, http_block("text/html; charset=utf-8", &plan.body)),
        Kind::Pdf => (RecordType::Response, http_block("application/pdf", &plan.body)),
        Kind::Request => (
            RecordType::Request,
            format!("GET /{} HTTP/1.1\r\nHost: example.org\r\n\r\n", plan.path).into_bytes(),
        ),
        Kind::Metadata => (RecordType::Metadata, format!("fetchTimeMs: {}\r\n", plan.secs).into_bytes()),
    };
    let record = RecordBuilder::default()
        .warc_type(warc_type)
        .date(date(plan.secs))
        .header(WarcHeader::TargetURI, url(plan))
        .header(WarcHeader::ContentType, "application/http; msgtype=response")
        .body(block)
        .build()
        .unwrap();
    writer.write(&record).unwrap();
}

fn read_all(bytes: &[u8]) -> (Vec<ArchiveRecord>, mathcrawl_core::warc::ShardStats) {
    let mut reader = ShardReader::new(BufReader::new(Cursor::new(bytes)));
    let records = reader.by_ref().collect::<Result<Vec<_>, _>>().unwrap();
    (records, reader.stats())
}

fn plan_strategy() -> impl Strategy<Value = Planned> {
    (
        prop_oneof![
            4 => Just(Kind::Html),
            1 => Just(Kind::Pdf),
            1 => Just(Kind::Request),
            1 => Just(Kind::Metadata),
        ],
        "[a-z0-9]{1,12}(/[a-z0-9]{1,8})?",
        0i64..10_000_000,
        // Bodies include CRLF runs and text that looks like a record header.
        "([ -~]|\r\n|é|∫){0,300}|WARC/1\\.0\r\nContent-Length: 5\r\n\r\n",
    )
        .prop_map(|(kind, path, secs, body)| Planned { kind, path, secs, body })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn html_responses_round_trip_in_order(plans in prop::collection::vec(plan_strategy(), 0..12)) {
        let bytes = buffered_shard(&plans);
        let (records, stats) = read_all(&bytes);
        let expected: Vec<&Planned> = plans.iter().filter(|s| matches!(s.kind, Kind::Html)).collect();
        prop_assert_eq!(records.len(), expected.len());
        for (record, plan) in records.iter().zip(&expected) {
            prop_assert_eq!(&record.url, &url(plan));
            prop_assert_eq!(record.fetch_time, date(plan.secs));
            prop_assert_eq!(record.status_code, 200);
            prop_assert_eq!(record.body.as_slice(), plan.body.as_bytes());
            prop_assert_eq!(decode_html(record), plan.body.clone());
            prop_assert!(!record.truncated);
        }
        prop_assert_eq!(stats.records, plans.len() as u64);
        prop_assert_eq!(stats.warnings, 0);
        let responses = plans.iter().filter(|s| matches!(s.kind, Kind::Html | Kind::Pdf)).count() as u64;
        prop_assert_eq!(stats.responses, responses);
        prop_assert_eq!(stats.yielded + stats.skipped_non_html, stats.responses);
    }

    #[test]
    fn decoding_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..2048), label in "[a-z0-9-]{0,12}") {
        let text = decode_bytes(&bytes, Some(&label));
        prop_assert!(bytes.is_empty() || !text.is_empty());
        let _ = decode_bytes(&bytes, None);
    }

    #[test]
    fn arbitrary_bytes_never_panic_the_reader(bytes in prop::collection::vec(any::<u8>(), 0..4096)) {
        let mut reader = ShardReader::new(BufReader::new(Cursor::new(bytes)));
        for item in reader.by_ref() {
            prop_assert!(item.is_ok());
        }
        let stats = reader.stats();
        prop_assert_eq!(stats.yielded + stats.skipped_non_html, stats.responses);
    }
}

fn buffered_shard(plans: &[Planned]) -> Vec<u8> {
    let mut writer = WarcWriter::new(std::io::BufWriter::new(Vec::new()));
    for plan in plans {
        write_record(&mut writer, plan);
    }
    writer.into_inner().unwrap()
}

fn html(path: &str, body: &str) -> Planned {
    Planned {
        kind: Kind::Html,
        path: path.into(),
        secs: 0,
        body: body.into(),
    }
}

#[test]
fn reference_reader_agrees_on_record_count() {
    let plans = vec![html("a", "<p>one</p>"), html("b", "<p>two</p>"), html("c", "<p>three</p>")];
    let bytes = buffered_shard(&plans);
    let reference = WarcReader::new(Cursor::new(bytes.clone())).iter_records().filter(|r| r.is_ok()).count();
    let (ours, _) = read_all(&bytes);
    assert_eq!(reference, ours.len());
}

#[test]
fn corrupt_record_is_skipped_with_one_warning() {
    let good = [html("a", "<p>one</p>"), html("b", "<p>two</p>"), html("c", "<p>three</p>")];
    let mut bytes = buffered_shard(&good[..2]);
    // A record whose Content-Length is not a number.
    bytes.extend_from_slice(
        b"WARC/1.0\r\nWARC-Type: response\r\nWARC-Target-URI: https://example.org/bad\r\n\
          WARC-Date: 2020-09-13T12:26:40Z\r\nContent-Length: lots\r\n\r\nHTTP/1.1 200 OK\r\n\r\n<p>bad</p>\r\n\r\n",
    );
    bytes.extend(buffered_shard(&good[2..]));
    let (records, stats) = read_all(&bytes);
    let urls: Vec<&str> = records.iter().map(|r| r.url.as_str()).collect();
    assert_eq!(urls, ["https://example.org/a", "https://example.org/b", "https://example.org/c"]);
    assert_eq!(stats.warnings, 1);
}

#[test]
fn truncated_file_keeps_earlier_records() {
    let mut bytes = buffered_shard(&[html("a", "<p>one</p>"), html("b", "<p>two two two</p>")]);
    bytes.truncate(bytes.len() - 12);
    let (records, stats) = read_all(&bytes);
    assert_eq!(records.len(), 1);
    assert_eq!(stats.warnings, 1);
}

#[test]
fn oversized_payload_is_cut_and_flagged() {
    let body = "x".repeat(5000);
    let bytes = buffered_shard(&[html("big", &body), html("small", "<p>ok</p>")]);
    let mut reader = ShardReader::new(BufReader::new(Cursor::new(bytes))).with_max_record_bytes(1000);
    let records: Vec<ArchiveRecord> = reader.by_ref().map(Result::unwrap).collect();
    assert_eq!(records.len(), 2);
    assert!(records[0].truncated);
    assert_eq!(records[0].body.len(), 1000);
    assert!(!records[1].truncated);
    assert_eq!(reader.stats().truncated, 1);
}

#[test]
fn gzip_members_are_read_transparently() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("multi.warc.gz");
    let mut file = Vec::new();
    for plan in [html("a", "<p>one</p>"), html("b", "<p>two</p>")] {
        // One gzip member per record, as crawl archives are laid out.
        let mut gz = flate2::write::GzEncoder::new(Vec::new(), flate2::Compression::fast());
        gz.write_all(&buffered_shard(&[plan])).unwrap();
        file.extend(gz.finish().unwrap());
    }
    std::fs::write(&path, file).unwrap();
    let urls: Vec<String> = open_shard(&path).unwrap().map(|r| r.unwrap().url).collect();
    assert_eq!(urls, ["https://example.org/a", "https://example.org/b"]);
}

#[test]
fn charset_falls_back_to_meta_then_utf8() {
    let latin1 = b"<meta charset=\"iso-8859-1\"><p>caf\xe9</p>";
    assert!(decode_bytes(latin1, None).contains("café"));
    assert!(decode_bytes("<p>café</p>".as_bytes(), Some("utf-8")).contains("café"));
    assert!(decode_bytes(b"<p>caf\xff</p>", None).contains('\u{FFFD}'));
}
