#include "cakeforge/dataset.hpp"

#include <charconv>
#include <iostream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cakeforge/error.hpp"
#include "cakeforge/rng.hpp"
#include "cakeforge/text_util.hpp"

namespace cake {

void validate(const MCQRecord& r) {
  auto fail = [&](const std::string& why) { throw Error(ErrorKind::Validation, "record " + r.qid + ": " + why); };
  if (r.qid.empty()) throw Error(ErrorKind::Validation, "record with empty qid (video " + r.video_id + ")");
  if (r.video_id.empty()) fail("empty video_id");
  if (text::trim(r.question).empty()) fail("empty question");
  if (r.answer < 0 || r.answer >= static_cast<int>(r.options.size())) fail("answer index out of range");
  std::set<std::string> keys;
  for (const auto& o : r.options) {
    if (text::trim(o).empty()) fail("empty option");
    if (!keys.insert(text::normalize_key(o)).second) fail("duplicate option '" + o + "'");
  }
}

std::string make_qid(const std::string& video_id, std::size_t choice_index) {
  return video_id + "#" + std::to_string(choice_index);
}

namespace {

void add_caption(std::vector<CaptionRecord>& out, std::unordered_set<std::string>& ids, CaptionRecord rec,
                 const std::string& where) {
  rec.video_id = text::trim(rec.video_id);
  if (rec.video_id.empty()) throw Error(ErrorKind::Parse, where + ": empty video_id");
  if (text::trim(rec.caption).empty()) throw Error(ErrorKind::Parse, where + ": empty caption");
  rec.caption = text::trim(rec.caption);
  if (!ids.insert(rec.video_id).second)
    throw Error(ErrorKind::DuplicateId, where + ": duplicate video_id '" + rec.video_id + "'");
  out.push_back(std::move(rec));
}

}  // namespace

std::vector<CaptionRecord> parse_captions(const std::string& content, const std::string& origin) {
  std::vector<CaptionRecord> out;
  std::unordered_set<std::string> ids;

  const auto first = content.find_first_not_of(" \t\r\n");
  const bool jsonl = first != std::string::npos && content[first] == '{';
  if (jsonl) {
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      const auto where = origin + ":" + std::to_string(line_no);
      CaptionRecord rec;
      try {
        const auto j = nlohmann::json::parse(line);
        rec.video_id = j.at("video_id").is_string() ? j["video_id"].get<std::string>() : j["video_id"].dump();
        rec.caption = j.at("caption").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, where + ": " + e.what());
      }
      add_caption(out, ids, std::move(rec), where);
    }
    return out;
  }

  const auto rows = parse_csv_rows(content, origin);
  std::size_t row_no = 0;
  for (const auto& row : rows) {
    ++row_no;
    const auto where = origin + ":" + std::to_string(row_no);
    if (row.size() == 1 && text::trim(row[0]).empty()) continue;
    if (row.size() != 2) throw Error(ErrorKind::Parse, where + ": expected 2 columns, got " + std::to_string(row.size()));
    if (row_no == 1 && text::iequals(row[0], "video_id") && text::iequals(row[1], "caption")) continue;
    add_caption(out, ids, CaptionRecord{row[0], row[1]}, where);
  }
  return out;
}

std::vector<CaptionRecord> load_captions(const std::string& path) { return parse_captions(text::read_file(path), path); }

std::string serialize_captions(const std::vector<CaptionRecord>& captions) {
  std::string out;
  for (const auto& c : captions) {
    nlohmann::ordered_json j;
    j["video_id"] = c.video_id;
    j["caption"] = c.caption;
    out += j.dump() + "\n";
  }
  return out;
}

CorpusSplit split_corpus(const std::vector<CaptionRecord>& captions, std::size_t first_size, std::uint64_t seed) {
  if (first_size > captions.size())
    throw Error(ErrorKind::InvalidConfig, "split size " + std::to_string(first_size) + " exceeds corpus size " +
                                              std::to_string(captions.size()));
  auto shuffled = captions;
  Rng rng(seed);
  rng.shuffle(shuffled);
  CorpusSplit s;
  const auto mid = shuffled.begin() + static_cast<std::ptrdiff_t>(first_size);
  s.first.assign(shuffled.begin(), mid);
  s.second.assign(mid, shuffled.end());
  return s;
}

std::vector<DistillPair> distill_pairs(const std::vector<ResponseRecord>& responses) {
  std::vector<DistillPair> out;
  for (const auto& r : responses)
    for (const auto& c : r.candidates) out.push_back({r.caption, c});
  return out;
}

std::string serialize_distill(const std::vector<DistillPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    if (p.input.empty() || p.output.empty()) throw Error(ErrorKind::Validation, "distill pair with empty field");
    nlohmann::ordered_json j;
    j["input"] = p.input;
    j["output"] = p.output;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<DistillPair> parse_distill(const std::string& content, const std::string& origin) {
  std::istringstream in(content);
  std::vector<DistillPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("input").get<std::string>(), j.at("output").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::size_t export_distill_corpus(const std::vector<DistillPair>& pairs, const std::string& path) {
  if (pairs.empty()) std::cerr << "[cake-forge] warning: distillation corpus is empty (" << path << ")\n";
  text::write_file(path, serialize_distill(pairs));
  return pairs.size();
}

std::vector<DistillPair> load_distill_corpus(const std::string& path) {
  return parse_distill(text::read_file(path), path);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv_rows(const std::string& content, const std::string& origin) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  std::size_t line = 1, quote_line = 0;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started)
          throw Error(ErrorKind::Parse, origin + ":" + std::to_string(line) + ": stray quote inside unquoted field");
        quoted = true;
        field_started = true;
        quote_line = line;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted)
    throw Error(ErrorKind::Parse, origin + ":" + std::to_string(quote_line) + ": unterminated quoted field");
  if (field_started || !row.empty()) {
    end_field();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string serialize_mcq_csv(const std::vector<MCQRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : records) {
    validate(r);
    out += csv_escape(r.video_id) + "," + csv_escape(r.qid) + "," + csv_escape(r.qtype) + "," +
           csv_escape(r.question);
    for (const auto& o : r.options) out += "," + csv_escape(o);
    out += "," + std::to_string(r.answer) + "\n";
  }
  return out;
}

std::vector<MCQRecord> parse_mcq_csv(const std::string& content, const std::string& origin) {
  const auto rows = parse_csv_rows(content, origin);
  if (rows.empty()) throw Error(ErrorKind::Parse, origin + ": missing header");
  if (text::join(rows.front(), ",") != kCsvHeader)
    throw Error(ErrorKind::Parse, origin + ": header must be exactly '" + std::string(kCsvHeader) + "'");
  std::vector<MCQRecord> out;
  std::set<std::string> qids;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto where = origin + ": row " + std::to_string(i);
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 10) throw Error(ErrorKind::Parse, where + ": expected 10 fields, got " + std::to_string(row.size()));
    MCQRecord r;
    r.video_id = row[0];
    r.qid = row[1];
    r.qtype = row[2];
    r.question = row[3];
    for (std::size_t k = 0; k < 5; ++k) r.options[k] = row[4 + k];
    const auto& a = row[9];
    auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), r.answer);
    if (ec != std::errc() || ptr != a.data() + a.size())
      throw Error(ErrorKind::Parse, "record " + r.qid + ": answer '" + a + "' is not an integer");
    validate(r);
    if (!qids.insert(r.qid).second) throw Error(ErrorKind::DuplicateId, where + ": duplicate qid '" + r.qid + "'");
    out.push_back(std::move(r));
  }
  return out;
}

void emit_csv(const std::vector<MCQRecord>& records, const std::string& path) {
  text::write_file(path, serialize_mcq_csv(records));
}

std::vector<MCQRecord> load_csv(const std::string& path) { return parse_mcq_csv(text::read_file(path), path); }

std::vector<MCQRecord> merge_datasets(const std::vector<MCQRecord>& a, const std::vector<MCQRecord>& b,
                                      const std::string& tag_a, const std::string& tag_b) {
  std::vector<MCQRecord> out;
  out.reserve(a.size() + b.size());
  std::set<std::string> qids;
  auto take = [&](const std::vector<MCQRecord>& src, const std::string& tag) {
    for (auto r : src) {
      r.qid = tag + ":" + r.qid;
      if (!qids.insert(r.qid).second) throw Error(ErrorKind::DuplicateId, "qid collision after namespacing: " + r.qid);
      out.push_back(std::move(r));
    }
  };
  take(a, tag_a);
  take(b, tag_b);
  return out;
}

}  // namespace cake
