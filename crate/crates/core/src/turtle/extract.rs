/// A fenced code block: its info string and body.
struct Fence<'a> {
    info: &'a str,
    body: String,
}

fn fences(text: &str) -> Vec<Fence<'_>> {
    let mut out = Vec::new();
    let mut lines = text.lines();
    while let Some(line) = lines.next() {
        let trimmed = line.trim_start();
        let Some(info) = trimmed.strip_prefix("```") else { continue };
        let mut body = Vec::new();
        for inner in lines.by_ref() {
            if inner.trim_start().starts_with("```") {
                break;
            }
            body.push(inner);
        }
        out.push(Fence { info: info.trim(), body: body.join("\n") });
    }
    out
}

/// Pulls Turtle out of a free-form LLM reply.
///
/// Preference order: the first fence labeled `turtle`/`ttl`, then the first
/// fence of any kind, then everything from the first line starting with
/// `@prefix`/`PREFIX` to the end of the reply.
pub fn extract_from_response(llm_text: &str) -> Option<String> {
    let blocks = fences(llm_text);
    let labeled = blocks.iter().find(|f| {
        let lang = f.info.split_whitespace().next().unwrap_or("").to_ascii_lowercase();
        lang == "turtle" || lang == "ttl"
    });
    if let Some(f) = labeled.or(blocks.first()) {
        return Some(f.body.clone());
    }
    let mut offset = 0;
    for line in llm_text.split_inclusive('\n') {
        let t = line.trim_start();
        if t.starts_with("@prefix") || t.get(..6).is_some_and(|w| w.eq_ignore_ascii_case("prefix")) {
            let start = offset + (line.len() - t.len());
            return Some(llm_text[start..].to_string());
        }
        offset += line.len();
    }
    None
}
