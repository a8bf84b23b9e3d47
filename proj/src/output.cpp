#include "fractrans/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

namespace fractrans {

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

namespace {

std::string header(const CsvProvenance& prov)
{
    return "# schema_version=" + std::to_string(series_schema_version) + "\n# config_hash=" + prov.config_hash +
           "\n# registry_version=" + std::to_string(prov.registry_version) + "\n";
}

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s + "\n";
}

const char* const norm_names[] = {"l2", "hhalf", "h1", "dissip_half", "dissip_1", "dissip_3half"};

void push_norms(std::vector<std::string>& row, const NormSet& n)
{
    for (double v : {n.l2, n.h_half, n.h1, n.dissip_half, n.dissip_1, n.dissip_3half}) row.push_back(format_double(v));
}

} // namespace

std::vector<std::string> series_columns(const std::vector<double>& betas, const std::vector<std::string>& residual_ids)
{
    std::vector<std::string> c{"t", "sup_norm", "min_val", "max_val", "grad_sup"};
    for (double b : betas) {
        const std::string tag = beta_tag(b);
        c.push_back("l2w_" + tag);
        c.push_back("hhalfw_" + tag);
        c.push_back("h1w_" + tag);
        c.push_back("dissip_half_" + tag);
        c.push_back("dissip_1_" + tag);
        c.push_back("dissip_3half_" + tag);
    }
    for (const char* n : norm_names) c.push_back(std::string(n) + "_u");
    for (const char* n : {"d3_sq", "lambda72_sq", "d4_sq", "cc_slack"}) c.push_back(n);
    for (const auto& id : residual_ids) {
        c.push_back("residual_" + id);
        c.push_back("tol_" + id);
    }
    return c;
}

std::string series_csv(const std::vector<DiagnosticsRecord>& records, const std::vector<double>& betas,
                       const CsvProvenance& prov)
{
    std::set<std::string> id_set;
    for (const auto& r : records)
        for (const auto& [id, v] : r.residuals) id_set.insert(id);
    const std::vector<std::string> ids(id_set.begin(), id_set.end());

    std::string out = header(prov) + join(series_columns(betas, ids));
    for (const auto& r : records) {
        if (r.weighted.size() != betas.size()) throw std::invalid_argument("series_csv: record and beta list disagree");
        std::vector<std::string> row;
        for (double v : {r.t, r.sup_norm, r.min_val, r.max_val, r.grad_sup}) row.push_back(format_double(v));
        for (const auto& n : r.weighted) push_norms(row, n);
        push_norms(row, r.unweighted);
        for (double v : {r.d3_sq, r.lambda72_sq, r.d4_sq}) row.push_back(format_double(v));
        row.push_back(r.cc_evaluated ? format_double(r.cc_slack) : "nan");
        for (const auto& id : ids) {
            const auto it = r.residuals.find(id);
            row.push_back(it == r.residuals.end() ? "nan" : format_double(it->second.value));
            row.push_back(it == r.residuals.end() ? "nan" : format_double(it->second.tolerance));
        }
        out += join(row);
    }
    return out;
}

std::string table_csv(const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows,
                      const CsvProvenance& prov)
{
    std::string out = header(prov) + join(columns);
    for (const auto& r : rows) {
        if (r.size() != columns.size()) throw std::invalid_argument("table_csv: row width mismatch");
        out += join(r);
    }
    return out;
}

} // namespace fractrans
