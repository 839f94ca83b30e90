#include "chunkalign/wa_format.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace chunkalign {

namespace {

[[noreturn]] void fail(const std::string& file, std::size_t line, const std::string& msg) {
    throw std::runtime_error(file + ":" + std::to_string(line) + ": " + msg);
}

struct LineSource {
    std::istream& in;
    const std::string& filename;
    std::size_t lineno = 0;

    bool next(std::string& out) {
        if (!std::getline(in, out)) return false;
        ++lineno;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return true;
    }
    [[noreturn]] void die(const std::string& msg) const { fail(filename, lineno, msg); }
};

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_int(const std::string& s, int& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

// One side of an alignment record: sorted 1-based token indices, empty when
// the file says "0".
std::vector<int> parse_index_side(const LineSource& src, const std::string& text) {
    std::vector<int> out;
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) {
        int v = 0;
        if (!parse_int(tok, v) || v < 0) src.die("bad token index \"" + tok + "\"");
        out.push_back(v);
    }
    if (out.empty()) src.die("alignment record side lists no indices");
    if (out.size() == 1 && out[0] == 0) return {};
    std::sort(out.begin(), out.end());
    if (out[0] == 0) src.die("index 0 mixed with real token indices");
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        src.die("duplicate token index in one record side");
    return out;
}

struct RawRecord {
    std::vector<int> src;
    std::vector<int> tgt;
    TypeLabel type = TypeLabel::NOALI;
    int score = 0;
    std::size_t lineno = 0;
};

// Maximal contiguous runs of a sorted index list, as 0-based half-open spans.
std::vector<ChunkSpan> index_runs(const std::vector<int>& sorted) {
    std::vector<ChunkSpan> runs;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[j - 1] + 1) ++j;
        runs.push_back({sorted[i] - 1, sorted[j - 1]});
        i = j;
    }
    return runs;
}

std::vector<Token> parse_token_block(LineSource& src, const std::string& id,
                                     const std::string& close_tag,
                                     const NormalizationMap& norm) {
    std::vector<Token> tokens;
    std::string line;
    for (;;) {
        if (!src.next(line)) src.die("sentence " + id + ": file ends inside a token block");
        if (line == close_tag) return tokens;
        std::size_t sp = line.find(' ');
        if (sp == std::string::npos || sp == 0)
            src.die("sentence " + id + ": token line needs \"index form\"");
        int idx = 0;
        if (!parse_int(line.substr(0, sp), idx) || idx != static_cast<int>(tokens.size()) + 1)
            src.die("sentence " + id + ": token indices must count up from 1");
        std::string surface = line.substr(sp + 1);
        if (surface.empty()) src.die("sentence " + id + ": empty token form");
        tokens.push_back(make_token(surface, norm));
    }
}

// Turns record index lists of one side into chunk spans covering the whole
// sentence, checking that every token is claimed exactly once.
std::vector<ChunkSpan> side_chunks(const std::string& filename, const std::string& id,
                                   const char* side, const std::vector<RawRecord>& records,
                                   std::size_t num_tokens, bool source_side) {
    std::vector<std::size_t> owner(num_tokens, 0);
    std::vector<ChunkSpan> spans;
    for (const RawRecord& r : records) {
        const std::vector<int>& idx = source_side ? r.src : r.tgt;
        for (int t : idx) {
            if (t > static_cast<int>(num_tokens))
                fail(filename, r.lineno, "sentence " + id + ": " + side + " token index " +
                                             std::to_string(t) + " exceeds sentence length");
            if (owner[static_cast<std::size_t>(t - 1)] != 0)
                fail(filename, r.lineno,
                     "sentence " + id + ": " + side + " token " + std::to_string(t) +
                         " is covered twice (also on line " +
                         std::to_string(owner[static_cast<std::size_t>(t - 1)]) + ")");
            owner[static_cast<std::size_t>(t - 1)] = r.lineno;
        }
        std::vector<ChunkSpan> runs = index_runs(idx);
        spans.insert(spans.end(), runs.begin(), runs.end());
    }
    for (std::size_t t = 0; t < num_tokens; ++t)
        if (owner[t] == 0)
            throw std::runtime_error(filename + ": sentence " + id + ": " + side + " token " +
                                     std::to_string(t + 1) +
                                     " is not covered by any alignment record");
    std::sort(spans.begin(), spans.end(),
              [](const ChunkSpan& a, const ChunkSpan& b) { return a.begin < b.begin; });
    return spans;
}

int chunk_id_of(const std::vector<ChunkSpan>& spans, int begin) {
    for (std::size_t i = 0; i < spans.size(); ++i)
        if (spans[i].begin == begin) return static_cast<int>(i) + 1;
    return 0;  // unreachable after coverage validation
}

std::string join_surfaces(const std::vector<Token>& tokens, int begin, int end) {
    std::string out;
    for (int t = begin; t < end; ++t) {
        if (!out.empty()) out += ' ';
        out += tokens[static_cast<std::size_t>(t)].surface;
    }
    return out;
}

}  // namespace

ChunkedSentence parse_chunks(const std::string& line, const NormalizationMap& norm) {
    std::vector<Token> tokens;
    std::vector<ChunkSpan> spans;
    bool open = false;
    int begin = 0;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            tokens.push_back(make_token(cur, norm));
            cur.clear();
        }
    };
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        const std::string col = " at column " + std::to_string(i + 1);
        if (ch == '[') {
            if (open) throw std::invalid_argument("nested '['" + col);
            open = true;
            begin = static_cast<int>(tokens.size());
        } else if (ch == ']') {
            if (!open) throw std::invalid_argument("']' without matching '['" + col);
            flush();
            if (static_cast<int>(tokens.size()) == begin)
                throw std::invalid_argument("empty chunk" + col);
            spans.push_back({begin, static_cast<int>(tokens.size())});
            open = false;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            flush();
        } else {
            if (!open)
                throw std::invalid_argument(std::string("text outside brackets") + col);
            cur += ch;
        }
    }
    if (open)
        throw std::invalid_argument("unclosed '[' at column " + std::to_string(line.size() + 1));
    return make_chunked_sentence(std::move(tokens), std::move(spans));
}

WaDocument parse_wa_stream(std::istream& in, const std::string& filename,
                           const NormalizationMap& norm) {
    LineSource src{in, filename};
    WaDocument doc;
    std::string line;
    for (;;) {
        // Find the next sentence header, tolerating blank separator lines.
        do {
            if (!src.next(line)) return doc;
        } while (trim(line).empty());

        const std::string header = "<sentence id=\"";
        if (line.rfind(header, 0) != 0)
            src.die("expected <sentence> header, got \"" + line + "\"");
        std::size_t id_end = line.find('"', header.size());
        if (id_end == std::string::npos) src.die("unterminated sentence id");
        WaEntry entry;
        entry.id = line.substr(header.size(), id_end - header.size());
        if (entry.id.empty()) src.die("empty sentence id");
        const std::string status_key = " status=\"";
        std::size_t st = line.find(status_key, id_end);
        if (st != std::string::npos) {
            std::size_t st_end = line.find('"', st + status_key.size());
            if (st_end == std::string::npos) src.die("unterminated status attribute");
            entry.status = line.substr(st + status_key.size(), st_end - st - status_key.size());
        }

        if (!src.next(line) || line.rfind("//", 0) != 0)
            src.die("sentence " + entry.id + ": expected \"// <source text>\" comment line");
        entry.source_text = line.size() > 3 ? line.substr(3) : "";
        if (!src.next(line) || line.rfind("//", 0) != 0)
            src.die("sentence " + entry.id + ": expected \"// <target text>\" comment line");
        entry.target_text = line.size() > 3 ? line.substr(3) : "";

        if (!src.next(line) || line != "<source>")
            src.die("sentence " + entry.id + ": expected <source>");
        std::vector<Token> src_tokens = parse_token_block(src, entry.id, "</source>", norm);
        if (!src.next(line) || line != "<translation>")
            src.die("sentence " + entry.id + ": expected <translation>");
        std::vector<Token> tgt_tokens = parse_token_block(src, entry.id, "</translation>", norm);

        if (!src.next(line) || line != "<alignment>")
            src.die("sentence " + entry.id + ": expected <alignment>");
        std::vector<RawRecord> records;
        for (;;) {
            if (!src.next(line))
                src.die("sentence " + entry.id + ": file ends inside <alignment>");
            if (line == "</alignment>") break;
            if (trim(line).empty()) continue;
            RawRecord rec;
            rec.lineno = src.lineno;
            std::size_t a = line.find(" // ");
            std::size_t b = a == std::string::npos ? a : line.find(" // ", a + 4);
            std::size_t c = b == std::string::npos ? b : line.find(" // ", b + 4);
            if (c == std::string::npos)
                src.die("sentence " + entry.id +
                        ": alignment line needs \"indices // type // score // text\"");
            std::string idx = line.substr(0, a);
            std::size_t sep = idx.find(" <==> ");
            if (sep == std::string::npos)
                src.die("sentence " + entry.id + ": alignment indices need \" <==> \"");
            rec.src = parse_index_side(src, idx.substr(0, sep));
            rec.tgt = parse_index_side(src, idx.substr(sep + 6));
            if (rec.src.empty() && rec.tgt.empty())
                src.die("sentence " + entry.id + ": record with both sides empty");
            std::string type_text = trim(line.substr(a + 4, b - a - 4));
            try {
                rec.type = type_from_name(type_text);
            } catch (const std::invalid_argument& e) {
                src.die("sentence " + entry.id + ": " + e.what());
            }
            std::string score_text = trim(line.substr(b + 4, c - b - 4));
            if (score_text == "NIL") {
                rec.score = 0;
            } else if (!parse_int(score_text, rec.score) || rec.score < 0 || rec.score > 5) {
                src.die("sentence " + entry.id + ": score must be 0-5 or NIL, got \"" +
                        score_text + "\"");
            }
            records.push_back(std::move(rec));
        }
        if (!src.next(line) || line != "</sentence>")
            src.die("sentence " + entry.id + ": expected </sentence>");

        std::vector<ChunkSpan> src_spans =
            side_chunks(filename, entry.id, "source", records, src_tokens.size(), true);
        std::vector<ChunkSpan> tgt_spans =
            side_chunks(filename, entry.id, "target", records, tgt_tokens.size(), false);
        try {
            entry.source = make_chunked_sentence(std::move(src_tokens), src_spans);
            entry.target = make_chunked_sentence(std::move(tgt_tokens), tgt_spans);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(filename + ": sentence " + entry.id + ": " + e.what());
        }
        for (const RawRecord& r : records) {
            LabeledPair p;
            p.type = r.type;
            p.score = r.score;
            for (const ChunkSpan& run : index_runs(r.src))
                p.src_chunks.push_back(chunk_id_of(src_spans, run.begin));
            for (const ChunkSpan& run : index_runs(r.tgt))
                p.tgt_chunks.push_back(chunk_id_of(tgt_spans, run.begin));
            entry.pairs.push_back(std::move(p));
        }
        doc.entries.push_back(std::move(entry));
    }
}

WaDocument parse_wa(const std::string& path, const NormalizationMap& norm) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return parse_wa_stream(f, path, norm);
}

void write_wa_stream(const WaDocument& doc, std::ostream& out) {
    for (const WaEntry& entry : doc.entries) {
        for (int side = 0; side < 2; ++side) {
            const ChunkedSentence& sent = side == 0 ? entry.source : entry.target;
            const char* name = side == 0 ? "source" : "target";
            std::vector<int> seen(static_cast<std::size_t>(sent.chunk_count()), 0);
            for (const LabeledPair& p : entry.pairs)
                for (int id : side == 0 ? p.src_chunks : p.tgt_chunks) {
                    if (id < 1 || id > sent.chunk_count())
                        throw std::invalid_argument("sentence " + entry.id + ": " + name +
                                                    " chunk id " + std::to_string(id) +
                                                    " out of range");
                    ++seen[static_cast<std::size_t>(id - 1)];
                }
            for (std::size_t i = 0; i < seen.size(); ++i)
                if (seen[i] != 1)
                    throw std::invalid_argument("sentence " + entry.id + ": " + name + " chunk " +
                                                std::to_string(i + 1) + " appears in " +
                                                std::to_string(seen[i]) +
                                                " records; expected exactly 1");
        }

        out << "<sentence id=\"" << entry.id << "\" status=\"" << entry.status << "\">\n";
        std::string src_text = entry.source_text.empty()
                                   ? join_surfaces(entry.source.tokens, 0,
                                                   static_cast<int>(entry.source.tokens.size()))
                                   : entry.source_text;
        std::string tgt_text = entry.target_text.empty()
                                   ? join_surfaces(entry.target.tokens, 0,
                                                   static_cast<int>(entry.target.tokens.size()))
                                   : entry.target_text;
        out << "// " << src_text << "\n";
        out << "// " << tgt_text << "\n";
        out << "<source>\n";
        for (std::size_t t = 0; t < entry.source.tokens.size(); ++t)
            out << t + 1 << ' ' << entry.source.tokens[t].surface << "\n";
        out << "</source>\n";
        out << "<translation>\n";
        for (std::size_t t = 0; t < entry.target.tokens.size(); ++t)
            out << t + 1 << ' ' << entry.target.tokens[t].surface << "\n";
        out << "</translation>\n";
        out << "<alignment>\n";
        for (const LabeledPair& p : entry.pairs) {
            std::string src_idx, tgt_idx, src_txt, tgt_txt;
            std::vector<int> src_ids = p.src_chunks;
            std::vector<int> tgt_ids = p.tgt_chunks;
            std::sort(src_ids.begin(), src_ids.end());
            std::sort(tgt_ids.begin(), tgt_ids.end());
            for (int id : src_ids) {
                const ChunkSpan& s = entry.source.chunk(id);
                for (int t = s.begin; t < s.end; ++t) {
                    if (!src_idx.empty()) src_idx += ' ';
                    src_idx += std::to_string(t + 1);
                }
                if (!src_txt.empty()) src_txt += ' ';
                src_txt += join_surfaces(entry.source.tokens, s.begin, s.end);
            }
            for (int id : tgt_ids) {
                const ChunkSpan& s = entry.target.chunk(id);
                for (int t = s.begin; t < s.end; ++t) {
                    if (!tgt_idx.empty()) tgt_idx += ' ';
                    tgt_idx += std::to_string(t + 1);
                }
                if (!tgt_txt.empty()) tgt_txt += ' ';
                tgt_txt += join_surfaces(entry.target.tokens, s.begin, s.end);
            }
            if (src_idx.empty()) {
                src_idx = "0";
                src_txt = "-not aligned-";
            }
            if (tgt_idx.empty()) {
                tgt_idx = "0";
                tgt_txt = "-not aligned-";
            }
            out << src_idx << " <==> " << tgt_idx << " // " << type_name(p.type) << " // ";
            if (p.score == 0)
                out << "NIL";
            else
                out << p.score;
            out << " // " << src_txt << " <==> " << tgt_txt << "\n";
        }
        out << "</alignment>\n";
        out << "</sentence>\n";
    }
}

void write_wa(const WaDocument& doc, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write_wa_stream(doc, f);
    if (!f) throw std::runtime_error("failed writing " + path);
}

std::vector<LabeledSentencePair> labeled_pairs(const WaDocument& doc) {
    std::vector<LabeledSentencePair> out;
    out.reserve(doc.entries.size());
    for (const WaEntry& e : doc.entries) out.push_back({e.source, e.target, e.pairs});
    return out;
}

}  // namespace chunkalign
