#include "chunkalign/forest.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "chunkalign/parallel.h"

namespace chunkalign {

namespace {

// splitmix64 output function; also used to fold class/tree ids into per-tree
// stream seeds so serial and parallel training draw identical numbers.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d649fb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t tree_seed(std::uint64_t master, std::uint64_t cls, std::uint64_t tree) {
    std::uint64_t s = mix64(master ^ (cls + 1) * 0x9e3779b97f4a7c15ull);
    return mix64(s ^ (tree + 1) * 0xbf58476d1ce4e5b9ull);
}

struct Rng {
    std::uint64_t state;
    std::uint64_t next() { return state = mix64(state); }
    // Modulo draw: slightly biased but simple, stable and platform-free,
    // which matters more here than uniformity in the last bit.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

double gini(std::size_t pos, std::size_t n) {
    double p = static_cast<double>(pos) / static_cast<double>(n);
    double q = 1.0 - p;
    return 1.0 - p * p - q * q;
}

struct TreeBuilder {
    const std::vector<std::vector<double>>& X;
    const std::vector<char>& y;
    int max_depth;
    std::size_t min_leaf;
    int k_features;
    Rng rng;
    Tree tree;
    std::vector<int> feature_pool;  // scratch for per-split feature sampling

    TreeBuilder(const std::vector<std::vector<double>>& X_, const std::vector<char>& y_,
                const ForestHyper& hyper, int k, std::uint64_t seed)
        : X(X_), y(y_), max_depth(hyper.max_depth),
          min_leaf(static_cast<std::size_t>(hyper.min_leaf)), k_features(k), rng{seed} {
        feature_pool.resize(X.empty() ? 0 : X[0].size());
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
    }

    int build(std::vector<int>& rows, int depth) {
        int idx = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        const std::size_t n = rows.size();
        std::size_t pos = 0;
        for (int r : rows) pos += static_cast<std::size_t>(y[static_cast<std::size_t>(r)]);

        bool leaf = depth >= max_depth || pos == 0 || pos == n || n < 2 * min_leaf;
        int best_f = -1;
        double best_thr = 0;
        if (!leaf) {
            // Partial Fisher-Yates over the feature pool; first k are the
            // sample for this split, in draw order.
            const int d = static_cast<int>(feature_pool.size());
            for (int i = 0; i < k_features; ++i) {
                std::size_t j = static_cast<std::size_t>(i) +
                                rng.below(static_cast<std::size_t>(d - i));
                std::swap(feature_pool[static_cast<std::size_t>(i)], feature_pool[j]);
            }
            const double parent = gini(pos, n);
            double best_gain = 1e-12;  // a split must clear this to count
            std::vector<std::pair<double, char>> vals(n);
            for (int fi = 0; fi < k_features; ++fi) {
                const int f = feature_pool[static_cast<std::size_t>(fi)];
                for (std::size_t r = 0; r < n; ++r) {
                    const std::size_t row = static_cast<std::size_t>(rows[r]);
                    vals[r] = {X[row][static_cast<std::size_t>(f)], y[row]};
                }
                std::sort(vals.begin(), vals.end());
                std::size_t left_pos = 0;
                for (std::size_t i = 1; i < n; ++i) {
                    left_pos += static_cast<std::size_t>(vals[i - 1].second);
                    if (i < min_leaf || n - i < min_leaf) continue;
                    if (vals[i - 1].first == vals[i].first) continue;
                    double gain = parent -
                                  (static_cast<double>(i) / n) * gini(left_pos, i) -
                                  (static_cast<double>(n - i) / n) * gini(pos - left_pos, n - i);
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_f = f;
                        best_thr = vals[i - 1].first;
                    }
                }
            }
            leaf = best_f < 0;
        }

        if (leaf) {
            tree.nodes[static_cast<std::size_t>(idx)].value =
                static_cast<double>(pos) / static_cast<double>(n);
            return idx;
        }

        std::vector<int> left_rows, right_rows;
        left_rows.reserve(n);
        right_rows.reserve(n);
        for (int r : rows)
            if (X[static_cast<std::size_t>(r)][static_cast<std::size_t>(best_f)] <= best_thr)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);

        tree.nodes[static_cast<std::size_t>(idx)].feature = best_f;
        tree.nodes[static_cast<std::size_t>(idx)].threshold = best_thr;
        int l = build(left_rows, depth + 1);
        int r = build(right_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(idx)].left = l;
        tree.nodes[static_cast<std::size_t>(idx)].right = r;
        return idx;
    }
};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i) & 0xff));
}

void put_i32(std::string& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

struct ByteReader {
    const std::string& buf;
    std::size_t at = 0;

    void need(std::size_t n) const {
        if (at + n > buf.size()) throw std::runtime_error("model file truncated");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[at + i])) << (8 * i);
        at += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[at + i])) << (8 * i);
        at += 8;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
};

constexpr char kMagic[8] = {'C', 'A', 'F', 'O', 'R', 'E', 'S', 'T'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

NormStats fit_norm(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("cannot fit normalization on an empty set");
    const std::size_t d = rows[0].size();
    const double n = static_cast<double>(rows.size());
    NormStats s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 0.0);
    for (const auto& r : rows) {
        if (r.size() != d) throw std::invalid_argument("rows have mixed dimensionality");
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
    }
    for (std::size_t j = 0; j < d; ++j) s.mean[j] /= n;
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) {
            double dlt = r[j] - s.mean[j];
            s.stddev[j] += dlt * dlt;
        }
    for (std::size_t j = 0; j < d; ++j) {
        s.stddev[j] = std::sqrt(s.stddev[j] / n);
        if (s.stddev[j] == 0) s.stddev[j] = 1;
    }
    return s;
}

std::vector<double> apply_norm(const NormStats& norm, const std::vector<double>& x) {
    if (x.size() != norm.mean.size())
        throw std::invalid_argument("feature dimension does not match normalization stats");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - norm.mean[j]) / norm.stddev[j];
    return out;
}

double Tree::predict(const std::vector<double>& x) const {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
        const TreeNode& nd = nodes[at];
        at = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] <= nd.threshold
                                          ? nd.left
                                          : nd.right);
    }
    return nodes[at].value;
}

std::vector<double> ForestModel::scores(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("feature dimension does not match the model");
    std::vector<double> z = apply_norm(norm, x);
    std::vector<double> out(classes.size(), 0.0);
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        int votes = 0;
        for (const Tree& t : per_class[c]) votes += t.predict(z) > 0.5 ? 1 : 0;
        out[c] = per_class[c].empty() ? 0.0
                                      : static_cast<double>(votes) /
                                            static_cast<double>(per_class[c].size());
    }
    return out;
}

int ForestModel::predict(const std::vector<double>& x) const {
    std::vector<double> sc = scores(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < sc.size(); ++c)
        if (sc[c] > sc[best]) best = c;
    return classes[best];
}

ForestModel train_forest(const TrainingSet& data, const ForestHyper& hyper, int jobs) {
    const std::size_t n = data.rows.size();
    if (n < 2) throw std::invalid_argument("training needs at least two rows");
    if (data.labels.size() != n)
        throw std::invalid_argument("row and label counts do not match");
    const std::size_t d = data.rows[0].size();
    if (d == 0) throw std::invalid_argument("rows have no features");
    for (const auto& r : data.rows)
        if (r.size() != d) throw std::invalid_argument("rows have mixed dimensionality");
    if (hyper.num_trees < 1 || hyper.max_depth < 0 || hyper.min_leaf < 1)
        throw std::invalid_argument("bad forest hyperparameters");

    std::vector<int> classes = data.classes;
    if (classes.empty()) {
        std::set<int> distinct(data.labels.begin(), data.labels.end());
        classes.assign(distinct.begin(), distinct.end());
    }
    {
        std::set<int> allowed(classes.begin(), classes.end());
        if (allowed.size() != classes.size())
            throw std::invalid_argument("duplicate entries in class list");
        for (int l : data.labels)
            if (!allowed.count(l))
                throw std::invalid_argument("label " + std::to_string(l) +
                                            " missing from class list");
        std::set<int> present(data.labels.begin(), data.labels.end());
        if (present.size() < 2)
            throw std::invalid_argument(
                "training data has a single class; use a constant predictor instead");
    }

    ForestModel model;
    model.classes = classes;
    model.dim = static_cast<int>(d);
    model.hyper = hyper;

    // Canonical row order: everything downstream (normalization sums, bootstrap
    // draws, split scans) runs over this, so training is invariant to the order
    // rows arrived in.
    std::vector<int> canonical(n);
    std::iota(canonical.begin(), canonical.end(), 0);
    std::sort(canonical.begin(), canonical.end(), [&](int a, int b) {
        const auto& ra = data.rows[static_cast<std::size_t>(a)];
        const auto& rb = data.rows[static_cast<std::size_t>(b)];
        if (ra != rb) return ra < rb;
        return data.labels[static_cast<std::size_t>(a)] < data.labels[static_cast<std::size_t>(b)];
    });

    std::vector<std::vector<double>> raw(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        raw[i] = data.rows[static_cast<std::size_t>(canonical[i])];
        labels[i] = data.labels[static_cast<std::size_t>(canonical[i])];
    }
    model.norm = fit_norm(raw);

    std::vector<std::vector<double>> X(n);
    for (std::size_t i = 0; i < n; ++i) X[i] = apply_norm(model.norm, raw[i]);

    double fraction = hyper.feature_fraction;
    if (fraction <= 0) fraction = std::sqrt(static_cast<double>(d)) / static_cast<double>(d);
    int k = static_cast<int>(std::llround(fraction * static_cast<double>(d)));
    k = std::clamp(k, 1, static_cast<int>(d));

    std::vector<std::vector<char>> binary(classes.size(), std::vector<char>(n, 0));
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (std::size_t i = 0; i < n; ++i) binary[c][i] = labels[i] == classes[c] ? 1 : 0;

    model.per_class.assign(classes.size(), std::vector<Tree>(
                                               static_cast<std::size_t>(hyper.num_trees)));
    const int total = static_cast<int>(classes.size()) * hyper.num_trees;
    parallel_for(total, jobs, [&](int slot) {
        const std::size_t c = static_cast<std::size_t>(slot / hyper.num_trees);
        const std::size_t t = static_cast<std::size_t>(slot % hyper.num_trees);
        TreeBuilder builder(X, binary[c], hyper, k, tree_seed(hyper.seed, c, t));
        std::vector<int> bag(n);
        for (std::size_t i = 0; i < n; ++i) bag[i] = static_cast<int>(builder.rng.below(n));
        builder.build(bag, 0);
        model.per_class[c][t] = std::move(builder.tree);
    });
    return model;
}

void ForestModel::save(const std::string& path) const {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(classes.size()));
    for (int c : classes) put_i32(out, c);
    put_u32(out, static_cast<std::uint32_t>(dim));
    for (double v : norm.mean) put_f64(out, v);
    for (double v : norm.stddev) put_f64(out, v);
    put_u32(out, static_cast<std::uint32_t>(hyper.num_trees));
    put_u32(out, static_cast<std::uint32_t>(hyper.max_depth));
    put_u32(out, static_cast<std::uint32_t>(hyper.min_leaf));
    put_f64(out, hyper.feature_fraction);
    put_u64(out, hyper.seed);
    for (const auto& ensemble : per_class) {
        put_u32(out, static_cast<std::uint32_t>(ensemble.size()));
        for (const Tree& t : ensemble) {
            put_u32(out, static_cast<std::uint32_t>(t.nodes.size()));
            for (const TreeNode& nd : t.nodes) {
                put_i32(out, nd.feature);
                put_f64(out, nd.threshold);
                put_i32(out, nd.left);
                put_i32(out, nd.right);
                put_f64(out, nd.value);
            }
        }
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("failed writing " + path);
}

ForestModel ForestModel::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open model file " + path);
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    ByteReader r{buf};
    r.need(sizeof(kMagic));
    if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error(path + " is not a forest model file");
    r.at = sizeof(kMagic);
    std::uint32_t version = r.u32();
    if (version != kVersion)
        throw std::runtime_error("unsupported model version " + std::to_string(version));

    ForestModel m;
    std::uint32_t num_classes = r.u32();
    if (num_classes == 0 || num_classes > 1u << 20)
        throw std::runtime_error("model file corrupt: bad class count");
    m.classes.resize(num_classes);
    for (auto& c : m.classes) c = r.i32();
    m.dim = static_cast<int>(r.u32());
    if (m.dim <= 0 || m.dim > 1 << 24) throw std::runtime_error("model file corrupt: bad dim");
    m.norm.mean.resize(static_cast<std::size_t>(m.dim));
    for (auto& v : m.norm.mean) v = r.f64();
    m.norm.stddev.resize(static_cast<std::size_t>(m.dim));
    for (auto& v : m.norm.stddev) v = r.f64();
    m.hyper.num_trees = static_cast<int>(r.u32());
    m.hyper.max_depth = static_cast<int>(r.u32());
    m.hyper.min_leaf = static_cast<int>(r.u32());
    m.hyper.feature_fraction = r.f64();
    m.hyper.seed = r.u64();
    m.per_class.resize(num_classes);
    for (auto& ensemble : m.per_class) {
        std::uint32_t nt = r.u32();
        if (nt > 1u << 20) throw std::runtime_error("model file corrupt: bad tree count");
        ensemble.resize(nt);
        for (Tree& t : ensemble) {
            std::uint32_t nn = r.u32();
            if (nn == 0 || nn > 1u << 26)
                throw std::runtime_error("model file corrupt: bad node count");
            t.nodes.resize(nn);
            for (TreeNode& nd : t.nodes) {
                nd.feature = r.i32();
                nd.threshold = r.f64();
                nd.left = r.i32();
                nd.right = r.i32();
                nd.value = r.f64();
                if (nd.feature >= m.dim ||
                    (nd.feature >= 0 &&
                     (nd.left < 0 || nd.right < 0 || nd.left >= static_cast<int>(nn) ||
                      nd.right >= static_cast<int>(nn))))
                    throw std::runtime_error("model file corrupt: bad node record");
            }
        }
    }
    if (r.at != buf.size()) throw std::runtime_error("model file has trailing bytes");
    return m;
}

}  // namespace chunkalign
