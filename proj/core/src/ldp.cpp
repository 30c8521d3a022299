#include <blockface/ldp.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace blockface {

const std::array<std::array<int, 9>, 8> kKirschMasks = {{
    {-3, -3, 5, -3, 0, 5, -3, -3, 5},   // m0 east
    {-3, 5, 5, -3, 0, 5, -3, -3, -3},   // m1 north-east
    {5, 5, 5, -3, 0, -3, -3, -3, -3},   // m2 north
    {5, 5, -3, 5, 0, -3, -3, -3, -3},   // m3 north-west
    {5, -3, -3, 5, 0, -3, 5, -3, -3},   // m4 west
    {-3, -3, -3, 5, 0, -3, 5, 5, -3},   // m5 south-west
    {-3, -3, -3, -3, 0, -3, 5, 5, 5},   // m6 south
    {-3, -3, -3, -3, 0, 5, -3, 5, 5},   // m7 south-east
}};

namespace {

std::array<int, 56> make_code_table() {
    std::array<int, 56> codes{};
    int n = 0;
    for (int c = 0; c < 256; ++c)
        if (std::popcount(static_cast<unsigned>(c)) == 3) codes[n++] = c;
    return codes;
}

const std::array<int, 256>& bin_lookup() {
    static const std::array<int, 256> table = [] {
        std::array<int, 256> bins{};
        bins.fill(-1);
        const auto codes = make_code_table();
        for (int i = 0; i < 56; ++i) bins[codes[i]] = i;
        return bins;
    }();
    return table;
}

}  // namespace

const std::array<int, 56> kLdpCodes = make_code_table();

int ldp_bin_of_code(int code) {
    if (code < 0 || code > 255) return -1;
    return bin_lookup()[code];
}

KirschResponses kirsch_responses(const std::array<int, 9>& neighborhood) {
    KirschResponses r;
    for (int j = 0; j < 8; ++j) {
        int sum = 0;
        for (int i = 0; i < 9; ++i) sum += kKirschMasks[j][i] * neighborhood[i];
        r.m[j] = sum;
    }
    return r;
}

int ldp_code(const KirschResponses& responses, int k) {
    if (k != 3) throw std::invalid_argument("ldp_code: only k = 3 is supported");
    std::array<int, 8> order;
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const int ma = std::abs(responses.m[a]);
        const int mb = std::abs(responses.m[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    int code = 0;
    for (int i = 0; i < k; ++i) code |= 1 << order[i];
    return code;
}

std::vector<double> ldp_histogram(const GrayImage& img, const BlockSpec& spec) {
    if (spec.u < 3 || spec.v < 3)
        throw std::invalid_argument("ldp_histogram: block must be at least 3x3");
    if (spec.x < 0 || spec.y < 0 || spec.x + spec.u > img.width || spec.y + spec.v > img.height)
        throw std::invalid_argument("ldp_histogram: block out of bounds");

    std::vector<double> bins(56, 0.0);
    std::int64_t count = 0;
    for (int y = spec.y + 1; y < spec.y + spec.v - 1; ++y) {
        for (int x = spec.x + 1; x < spec.x + spec.u - 1; ++x) {
            const std::array<int, 9> nb = {
                img.at(x - 1, y - 1), img.at(x, y - 1), img.at(x + 1, y - 1),
                img.at(x - 1, y),     img.at(x, y),     img.at(x + 1, y),
                img.at(x - 1, y + 1), img.at(x, y + 1), img.at(x + 1, y + 1),
            };
            const int code = ldp_code(kirsch_responses(nb));
            bins[bin_lookup()[code]] += 1.0;
            ++count;
        }
    }
    for (double& b : bins) b /= static_cast<double>(count);
    return bins;
}

}  // namespace blockface
