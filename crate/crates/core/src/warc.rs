//! Streaming WARC/1.0 and WARC/1.1 reader.
//!
//! Only `response` records carrying an HTML payload are surfaced; everything
//! else is counted and skipped. Files may be plain or a concatenation of gzip
//! members (one member per record, as in Common Crawl shards).

use std::borrow::Cow;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::Path;
use std::sync::OnceLock;

use chrono::{DateTime, Utc};
use encoding_rs::{Encoding, UTF_8};
use flate2::bufread::MultiGzDecoder;
use regex::bytes::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_RECORD_BYTES: usize = 2 * 1024 * 1024;

/// Bytes of HTTP header allowed on top of the body limit when buffering.
const HTTP_HEADER_ALLOWANCE: usize = 64 * 1024;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchiveRecord {
    pub url: String,
    pub fetch_time: DateTime<Utc>,
    /// Payload `Content-Type` as sent by the server, parameters included.
    pub content_type: String,
    pub status_code: u16,
    pub body: Vec<u8>,
    pub record_id: String,
    /// Set when the payload exceeded the reader's size limit and was cut.
    pub truncated: bool,
}

impl ArchiveRecord {
    /// `charset` parameter of the payload content type, if any.
    pub fn charset(&self) -> Option<&str> {
        self.content_type.split(';').skip(1).find_map(|param| {
            let (key, value) = param.split_once('=')?;
            key.trim()
                .eq_ignore_ascii_case("charset")
                .then(|| value.trim().trim_matches(|c| c == '"' || c == '\''))
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardStats {
    /// Records with a well-formed header, of any type.
    pub records: u64,
    /// Well-formed `response` records.
    pub responses: u64,
    pub yielded: u64,
    pub skipped_non_html: u64,
    pub truncated: u64,
    /// Malformed records skipped with a warning.
    pub warnings: u64,
}

pub struct ShardReader<R> {
    reader: R,
    max_record_bytes: usize,
    stats: ShardStats,
    done: bool,
    /// Set after a malformed record was reported, so the skipped block that
    /// follows is not reported a second time.
    resyncing: bool,
    line: Vec<u8>,
}

/// Open a WARC shard, transparently handling multi-member gzip.
pub fn open_shard(path: &Path) -> Result<ShardReader<Box<dyn BufRead + Send>>> {
    let open_err = |source| Error::Open {
        path: path.to_owned(),
        source,
    };
    let file = File::open(path).map_err(open_err)?;
    let mut buffered = BufReader::with_capacity(1 << 16, file);
    let gzipped = buffered.fill_buf().map_err(open_err)?.starts_with(&[0x1f, 0x8b]);
    let reader: Box<dyn BufRead + Send> = if gzipped {
        Box::new(BufReader::with_capacity(1 << 16, MultiGzDecoder::new(buffered)))
    } else {
        Box::new(buffered)
    };
    Ok(ShardReader::new(reader))
}

impl<R: BufRead> ShardReader<R> {
    pub fn new(reader: R) -> Self {
        Self {
            reader,
            max_record_bytes: DEFAULT_MAX_RECORD_BYTES,
            stats: ShardStats::default(),
            done: false,
            resyncing: false,
            line: Vec::new(),
        }
    }

    pub fn with_max_record_bytes(mut self, max: usize) -> Self {
        self.max_record_bytes = max;
        self
    }

    pub fn stats(&self) -> ShardStats {
        self.stats
    }

    fn read_line(&mut self) -> io::Result<bool> {
        self.line.clear();
        Ok(self.reader.read_until(b'\n', &mut self.line)? > 0)
    }

    /// Advance to the next `WARC/1.x` version line. Any non-blank line seen
    /// on the way means a damaged record and is counted once.
    fn seek_record_start(&mut self) -> io::Result<bool> {
        let mut junk = false;
        let already_reported = std::mem::take(&mut self.resyncing);
        loop {
            if !self.read_line()? {
                if junk && !already_reported {
                    self.stats.warnings += 1;
                }
                return Ok(false);
            }
            let line = trim_eol(&self.line);
            if line == b"WARC/1.0" || line == b"WARC/1.1" {
                if junk && !already_reported {
                    self.stats.warnings += 1;
                    log::warn!("skipped malformed WARC record");
                }
                return Ok(true);
            }
            if !line.iter().all(u8::is_ascii_whitespace) {
                junk = true;
            }
        }
    }

    fn read_headers(&mut self) -> io::Result<Option<Vec<(String, String)>>> {
        let mut headers = Vec::new();
        loop {
            if !self.read_line()? {
                return Ok(None);
            }
            let line = trim_eol(&self.line);
            if line.is_empty() {
                return Ok(Some(headers));
            }
            let Some(colon) = line.iter().position(|&b| b == b':') else {
                return Ok(None);
            };
            let name = String::from_utf8_lossy(&line[..colon]).trim().to_owned();
            let value = String::from_utf8_lossy(&line[colon + 1..]).trim().to_owned();
            if name.is_empty() {
                return Ok(None);
            }
            headers.push((name, value));
        }
    }

    fn next_record(&mut self) -> io::Result<Option<ArchiveRecord>> {
        loop {
            if !self.seek_record_start()? {
                return Ok(None);
            }
            let Some(headers) = self.read_headers()? else {
                self.malformed("unreadable header block");
                self.resyncing = true;
                continue;
            };
            let header = |name: &str| {
                headers
                    .iter()
                    .find(|(k, _)| k.eq_ignore_ascii_case(name))
                    .map(|(_, v)| v.as_str())
            };
            let Some(length) = header("Content-Length").and_then(|v| v.parse::<u64>().ok())
            else {
                self.malformed("missing or invalid Content-Length");
                self.resyncing = true;
                continue;
            };
            let keep = length.min((self.max_record_bytes + HTTP_HEADER_ALLOWANCE) as u64);
            let mut block = Vec::with_capacity(keep as usize);
            (&mut self.reader).take(keep).read_to_end(&mut block)?;
            if (block.len() as u64) < keep {
                self.malformed("record block cut short by end of file");
                return Ok(None);
            }
            let rest = length - keep;
            if rest > 0 && io::copy(&mut (&mut self.reader).take(rest), &mut io::sink())? < rest {
                self.malformed("record block cut short by end of file");
                return Ok(None);
            }
            self.stats.records += 1;

            if !header("WARC-Type").is_some_and(|t| t.eq_ignore_ascii_case("response")) {
                continue;
            }
            let Some(parsed) = parse_response(&block, &headers) else {
                self.malformed("response record without a valid target URI, date or HTTP head");
                continue;
            };
            self.stats.responses += 1;
            let (mut record, body_len) = parsed;
            if !is_html(&record.content_type) {
                self.stats.skipped_non_html += 1;
                continue;
            }
            let declared_body = length - (block.len() - body_len) as u64;
            if declared_body > self.max_record_bytes as u64 {
                record.body.truncate(self.max_record_bytes);
                record.truncated = true;
                self.stats.truncated += 1;
            }
            self.stats.yielded += 1;
            return Ok(Some(record));
        }
    }

    fn malformed(&mut self, what: &str) {
        self.stats.warnings += 1;
        log::warn!("skipped malformed WARC record: {what}");
    }
}

impl<R: BufRead> Iterator for ShardReader<R> {
    type Item = Result<ArchiveRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_record() {
            Ok(Some(record)) => Some(Ok(record)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(err) => {
                self.done = true;
                Some(Err(err.into()))
            }
        }
    }
}

fn trim_eol(line: &[u8]) -> &[u8] {
    let line = line.strip_suffix(b"\n").unwrap_or(line);
    line.strip_suffix(b"\r").unwrap_or(line)
}

/// Split an HTTP response block. Returns the record (body included) and the
/// number of body bytes present in `block`.
fn parse_response(block: &[u8], headers: &[(String, String)]) -> Option<(ArchiveRecord, usize)> {
    let header = |name: &str| {
        headers
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    };
    let raw_uri = header("WARC-Target-URI")?;
    let uri = raw_uri.trim_start_matches('<').trim_end_matches('>');
    let parsed = url::Url::parse(uri).ok()?;
    parsed.host_str()?;
    let fetch_time = DateTime::parse_from_rfc3339(header("WARC-Date")?)
        .ok()?
        .with_timezone(&Utc);
    let record_id = header("WARC-Record-ID").unwrap_or_default().to_owned();

    let split = find_subslice(block, b"\r\n\r\n")
        .map(|p| (p, p + 4))
        .or_else(|| find_subslice(block, b"\n\n").map(|p| (p, p + 2)))?;
    let head = String::from_utf8_lossy(&block[..split.0]);
    let mut lines = head.lines();
    let status_line = lines.next()?;
    let mut parts = status_line.split_whitespace();
    if !parts.next()?.starts_with("HTTP/") {
        return None;
    }
    let status_code = parts.next()?.parse().ok()?;
    let content_type = lines
        .filter_map(|l| l.split_once(':'))
        .find(|(k, _)| k.trim().eq_ignore_ascii_case("Content-Type"))
        .map(|(_, v)| v.trim().to_owned())
        .or_else(|| header("WARC-Identified-Payload-Type").map(str::to_owned))
        .unwrap_or_default();
    let body = block[split.1..].to_vec();
    let body_len = body.len();
    Some((
        ArchiveRecord {
            url: uri.to_owned(),
            fetch_time,
            content_type,
            status_code,
            body,
            record_id,
            truncated: false,
        },
        body_len,
    ))
}

fn find_subslice(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    haystack.windows(needle.len()).position(|w| w == needle)
}

fn is_html(content_type: &str) -> bool {
    let mime = content_type.split(';').next().unwrap_or("").trim();
    mime.eq_ignore_ascii_case("text/html") || mime.eq_ignore_ascii_case("application/xhtml+xml")
}

fn meta_charset_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r#"(?i)<meta[^>]*?charset\s*=\s*["']?\s*([a-z0-9_:.\-]+)"#).expect("valid regex")
    })
}

/// Decode an HTML payload to text: HTTP charset, then a `<meta>` charset in
/// the first 1024 bytes, then UTF-8 with U+FFFD replacement.
pub fn decode_html(record: &ArchiveRecord) -> String {
    decode_bytes(&record.body, record.charset())
}

pub fn decode_bytes(body: &[u8], declared_charset: Option<&str>) -> String {
    let sniff = &body[..body.len().min(1024)];
    let encoding = declared_charset
        .and_then(|label| Encoding::for_label(label.as_bytes()))
        .or_else(|| {
            meta_charset_regex()
                .captures(sniff)
                .and_then(|c| Encoding::for_label(&c[1]))
        })
        .unwrap_or(UTF_8);
    // A page cannot really be UTF-16 if we are reading it as bytes of ASCII
    // markup; WHATWG maps such meta declarations to UTF-8.
    let encoding = if encoding == encoding_rs::UTF_16LE || encoding == encoding_rs::UTF_16BE {
        UTF_8
    } else {
        encoding
    };
    let body = if encoding == UTF_8 {
        body.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(body)
    } else {
        body
    };
    match encoding.decode_without_bom_handling(body).0 {
        Cow::Borrowed(s) => s.to_owned(),
        Cow::Owned(s) => s,
    }
}
