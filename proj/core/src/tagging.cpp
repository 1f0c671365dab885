#include "smellcheck/tagging.hpp"

#include <algorithm>
#include <fstream>

#include "util.hpp"

namespace smellcheck::tagging {

namespace {

constexpr std::string_view kAnnotationName = "CodeSmell";
constexpr std::string_view kTypePrefix = "CodeSmellType.";

const SmellKind* find_kind(const std::vector<SmellKind>& registry, std::string_view name) {
    for (const SmellKind& k : registry)
        if (k.name == name) return &k;
    return nullptr;
}

std::string strip_type_prefix(std::string_view raw) {
    if (raw.substr(0, kTypePrefix.size()) == kTypePrefix)
        raw.remove_prefix(kTypePrefix.size());
    return std::string(raw);
}

// Unescapes a Java string literal (with quotes) into its value.
std::string unquote(std::string_view raw) {
    if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') return std::string(raw);
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
        if (raw[i] == '\\' && i + 2 < raw.size()) {
            ++i;
            switch (raw[i]) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case '\\': out += '\\'; break;
                case '"': out += '"'; break;
                case '\'': out += '\''; break;
                default: out += raw[i]; break;
            }
        } else {
            out += raw[i];
        }
    }
    return out;
}

std::string escape_java_string(std::string_view value) {
    std::string out;
    for (char c : value) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c; break;
        }
    }
    return out;
}

struct TaggedElement {
    const AnnotationNode* annotation;
    std::string element_id;
    Granularity granularity;
    int line;
};

// Every @CodeSmell annotation of the unit with the element it annotates.
std::vector<TaggedElement> smell_annotations(const CompilationUnit& unit) {
    std::vector<TaggedElement> out;
    for (const TypeUnit& type : unit.types) {
        for (const AnnotationNode& a : type.annotations)
            if (a.name == kAnnotationName)
                out.push_back({&a, type.qualified_id, Granularity::type, type.declaration_line});
        for (const MethodUnit& m : type.methods)
            for (const AnnotationNode& a : m.annotations)
                if (a.name == kAnnotationName)
                    out.push_back({&a, m.qualified_id, Granularity::method, m.declaration_line});
    }
    return out;
}

std::size_t line_start_offset(const std::string& text, int line) {
    std::size_t offset = 0;
    for (int l = 1; l < line; ++l) {
        offset = text.find('\n', offset);
        if (offset == std::string::npos) return text.size();
        ++offset;
    }
    return offset;
}

std::string leading_indent(const std::string& text, std::size_t line_offset) {
    std::string indent;
    for (std::size_t i = line_offset; i < text.size() && (text[i] == ' ' || text[i] == '\t'); ++i)
        indent += text[i];
    return indent;
}

const ElementRef& require_element(const Corpus& corpus, std::string_view element_id,
                                  Granularity granularity, std::vector<ElementRef>& scratch) {
    const ElementRef* found = corpus.find(element_id, granularity, &scratch);
    if (!found)
        throw ElementNotFound("no " + to_string(granularity) + " element matches '" +
                              std::string(element_id) + "'");
    return *found;
}

void write_file_verbatim(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".smellcheck.tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string to_string(Origin origin) {
    switch (origin) {
        case Origin::expert: return "expert";
        case Origin::feedback_fp: return "feedback_fp";
        case Origin::feedback_fn: return "feedback_fn";
    }
    return "?";
}

Origin origin_from_string(const std::string& s) {
    if (s == "expert") return Origin::expert;
    if (s == "feedback_fp") return Origin::feedback_fp;
    if (s == "feedback_fn") return Origin::feedback_fn;
    throw ParseError(0, "unknown origin '" + s + "'");
}

std::vector<SmellTag> read_tags(const Corpus& corpus, const std::vector<SmellKind>& registry,
                                std::vector<TagIssue>* issues) {
    std::vector<SmellTag> tags;
    for (const CompilationUnit& unit : corpus.units) {
        for (const TaggedElement& te : smell_annotations(unit)) {
            const std::string location = unit.file_path + ":" + std::to_string(te.annotation->line);
            const std::string* type_arg = te.annotation->argument("type");
            if (!type_arg) {
                if (!issues) throw UnknownSmellKind("<missing type>", location);
                issues->push_back({unit.file_path, te.annotation->line,
                                   "@CodeSmell without a type member"});
                continue;
            }
            const std::string smell_name = strip_type_prefix(*type_arg);
            const SmellKind* kind = find_kind(registry, smell_name);
            if (!kind) {
                if (!issues) throw UnknownSmellKind(smell_name, location);
                issues->push_back(
                    {unit.file_path, te.annotation->line, "unknown smell kind '" + smell_name + "'"});
                continue;
            }
            if (kind->granularity != te.granularity) {
                const std::string msg = "smell '" + smell_name + "' applies to " +
                                        to_string(kind->granularity) + "s but annotates a " +
                                        to_string(te.granularity) + " at " + location;
                if (!issues) throw GranularityMismatch(msg);
                issues->push_back({unit.file_path, te.annotation->line, msg});
                continue;
            }
            SmellTag tag;
            tag.element_id = te.element_id;
            tag.smell = smell_name;
            if (const std::string* d = te.annotation->argument("description"))
                tag.description = unquote(*d);
            tag.file_path = unit.file_path;
            tag.line = te.annotation->line;
            tags.push_back(std::move(tag));
        }
    }
    return tags;
}

std::string insert_tag_text(const CompilationUnit& unit, const ElementRef& element,
                            const SmellKind& smell, std::string_view description) {
    const std::vector<AnnotationNode>* annotations =
        element.method ? &element.method->annotations : &element.type->annotations;
    for (const AnnotationNode& a : *annotations)
        if (a.name == kAnnotationName) {
            const std::string* t = a.argument("type");
            if (t && strip_type_prefix(*t) == smell.name)
                throw AlreadyTagged("'" + element.qualified_id + "' already carries @CodeSmell(" +
                                    smell.name + ")");
        }

    const int decl_start =
        element.method ? element.method->line_span.start : element.type->line_span.start;
    const std::size_t at = line_start_offset(unit.source_text, decl_start);
    const std::string indent = leading_indent(unit.source_text, at);

    std::string annotation = indent + "@CodeSmell(type=CodeSmellType." + smell.name;
    if (!description.empty())
        annotation += ", description=\"" + escape_java_string(description) + "\"";
    annotation += ")\n";

    std::string out = unit.source_text;
    out.insert(at, annotation);
    return out;
}

std::string remove_tag_text(const CompilationUnit& unit, const ElementRef& element,
                            const SmellKind& smell) {
    const std::vector<AnnotationNode>* annotations =
        element.method ? &element.method->annotations : &element.type->annotations;
    const AnnotationNode* target = nullptr;
    for (const AnnotationNode& a : *annotations)
        if (a.name == kAnnotationName) {
            const std::string* t = a.argument("type");
            if (t && strip_type_prefix(*t) == smell.name) target = &a;
        }
    if (!target)
        throw TagNotFound("'" + element.qualified_id + "' carries no @CodeSmell(" + smell.name +
                          ")");

    const std::string& text = unit.source_text;
    // Remove the annotation's whole lines; refuse when other code shares them.
    std::size_t begin = line_start_offset(text, target->span.start);
    std::size_t end = text.find('\n', target->end_offset);
    end = end == std::string::npos ? text.size() : end + 1;

    for (std::size_t i = begin; i < target->begin_offset; ++i)
        if (text[i] != ' ' && text[i] != '\t')
            throw TagNotFound("annotation at " + unit.file_path + ":" +
                              std::to_string(target->line) + " shares its line with other code");
    for (std::size_t i = target->end_offset; i + 1 < end; ++i)
        if (text[i] != ' ' && text[i] != '\t' && text[i] != '\r')
            throw TagNotFound("annotation at " + unit.file_path + ":" +
                              std::to_string(target->line) + " shares its line with other code");

    std::string out = text;
    out.erase(begin, end - begin);
    return out;
}

namespace {

TagFileResult rewrite_tag(const Corpus& corpus, std::string_view element_id,
                          const SmellKind& smell, std::string_view description, bool dry_run,
                          bool removing) {
    std::vector<ElementRef> scratch;
    const ElementRef& el = require_element(corpus, element_id, smell.granularity, scratch);

    TagFileResult result;
    result.file = el.unit->file_path;
    result.new_content = removing ? remove_tag_text(*el.unit, el, smell)
                                  : insert_tag_text(*el.unit, el, smell, description);
    if (!dry_run) {
        write_file_verbatim(result.file, result.new_content);
        result.written = true;
    }
    return result;
}

}  // namespace

TagFileResult write_tag(const Corpus& corpus, std::string_view element_id, const SmellKind& smell,
                        std::string_view description, bool dry_run) {
    return rewrite_tag(corpus, element_id, smell, description, dry_run, false);
}

TagFileResult remove_tag(const Corpus& corpus, std::string_view element_id, const SmellKind& smell,
                         bool dry_run) {
    return rewrite_tag(corpus, element_id, smell, "", dry_run, true);
}

namespace {

// Identity column for the method: the bare name (as in the sample schema),
// with a #k disambiguator when the class overloads it. Keeps the CSV free of
// commas so no quoting is ever needed.
std::string method_column(const TypeUnit& type, const MethodUnit& m) {
    int same = 0, index = 0;
    for (const MethodUnit& other : type.methods) {
        if (other.name != m.name) continue;
        ++same;
        if (&other == &m) index = same;
    }
    return same > 1 ? m.name + "#" + std::to_string(index) : m.name;
}

SampleRow row_for_element(const ElementRef& el, const Corpus& corpus, const SmellKind& smell,
                          const std::string& application) {
    const metrics::MetricVector vec =
        smell.granularity == Granularity::method ? metrics::method_metrics(*el.method, *el.unit)
                                                 : metrics::class_metrics(*el.type, corpus);
    SampleRow row;
    row.application = application;
    row.package_name = el.unit->package_name;
    row.class_name = el.type->name;
    if (el.method) row.method = method_column(*el.type, *el.method);
    row.values.reserve(smell.metric_set.size());
    for (const std::string& metric : smell.metric_set) row.values.push_back(vec.get(metric));
    return row;
}

}  // namespace

std::vector<SampleRow> build_sample(const Corpus& corpus, const SmellKind& smell,
                                    const std::string& application,
                                    const std::vector<SmellKind>& registry) {
    std::vector<ElementRef> elements = corpus.elements(smell.granularity);
    if (smell.granularity == Granularity::method) {
        std::erase_if(elements, [](const ElementRef& e) { return !e.method->body; });
    }
    if (elements.empty())
        throw EmptyCorpus("corpus has no " + to_string(smell.granularity) + " elements");

    std::vector<TagIssue> issues;
    std::vector<SmellTag> tags = read_tags(corpus, registry, &issues);

    const std::string stamp = util::now_iso8601();
    std::vector<SampleRow> rows;
    rows.reserve(elements.size());
    for (const ElementRef& el : elements) {
        SampleRow row = row_for_element(el, corpus, smell, application);
        row.label = 0;
        for (const SmellTag& tag : tags)
            if (tag.smell == smell.name && tag.element_id == el.qualified_id) {
                row.label = 1;
                break;
            }
        row.origin = Origin::expert;
        row.timestamp = stamp;
        rows.push_back(std::move(row));
    }
    return rows;
}

SampleRow record_feedback(const Corpus& corpus, std::string_view element_id,
                          const SmellKind& smell, Verdict verdict,
                          const std::string& application) {
    std::vector<ElementRef> scratch;
    const ElementRef& el = require_element(corpus, element_id, smell.granularity, scratch);
    if (smell.granularity == Granularity::method && !el.method->body)
        throw ElementNotFound("'" + el.qualified_id + "' has no body to measure");

    SampleRow row = row_for_element(el, corpus, smell, application);
    row.label = verdict == Verdict::false_negative ? 1 : 0;
    row.origin =
        verdict == Verdict::false_negative ? Origin::feedback_fn : Origin::feedback_fp;
    row.timestamp = util::now_iso8601();
    return row;
}

}  // namespace smellcheck::tagging
