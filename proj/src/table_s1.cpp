#include "cswap/circuit_map.hpp"

#include <stdexcept>

namespace cswap {

// Sixteen published circuit designs; rows 1–8 target Δ₊, rows 9–16 target Δ₋.
const std::vector<TableRow>& table_s1() {
    static const std::vector<TableRow> rows = {
        {1, {532.0, 464.1, 187.9, 410.4, 729.4, 65.6, 279.4, 36.7}, 10.7, 11.3, 42.0, 42.0, -494.6, 804.1, 619.0, 0.16, 4.66, 2680.3, -536.1},
        {2, {119.2, 179.6, 86.8, 165.5, 956.6, 332.9, 440.2, 81.2}, 4.4, 3.8, 43.2, 43.2, -764.3, 453.7, -621.1, 0.13, 10.48, 1512.5, -302.5},
        {3, {215.4, 219.4, 100.5, 200.6, 907.9, 223.6, 23.8, 70.9}, 6.1, 6.7, 47.3, 46.9, -552.1, 844.6, 585.0, 0.19, 10.28, 2815.4, -563.1},
        {4, {310.2, 371.2, 74.9, 272.4, 183.5, 25.8, 649.2, 93.9}, 16.1, 19.2, 44.9, 44.9, 962.1, 562.8, 3049.7, 0.51, 0.52, 1876.0, -375.2},
        {5, {690.3, 486.3, 169.0, 393.8, 466.5, 48.7, 391.9, 40.4}, 15.1, 14.2, 33.3, 33.2, -987.4, 498.0, -978.9, 0.21, 1.37, 1660.0, -332.0},
        {6, {561.6, 438.5, 186.0, 397.1, 926.3, 76.2, 240.4, 37.3}, 9.7, 10.7, 40.9, 40.9, -540.4, 1007.1, 933.4, 0.15, 6.88, 3357.1, -671.4},
        {7, {379.3, 254.1, 90.3, 220.9, 850.3, 48.2, 84.0, 79.1}, 8.3, 12.1, 35.5, 35.5, 764.2, 1107.6, 3743.7, 0.21, 4.74, 3692.0, -738.4},
        {8, {699.7, 601.5, 230.9, 517.1, 664.2, 62.5, 507.3, 29.4}, 12.8, 12.6, 35.7, 35.7, -696.6, 582.7, -227.7, 0.16, 2.63, 1942.3, -388.5},
        {9, {156.9, 192.3, 80.7, 181.9, 950.5, 734.8, 839.6, 89.9}, 5.1, 5.8, 51.7, 51.7, 727.6, 1081.2, 707.2, 0.21, 14.39, 3604.1, -720.8},
        {10, {699.8, 611.2, 236.7, 547.7, 676.7, 64.1, 185.7, 29.0}, 12.7, 12.9, 45.4, 45.4, 857.1, 965.2, 216.1, 0.15, 4.73, 3217.3, -643.5},
        {11, {313.1, 199.6, 78.3, 185.2, 994.4, 152.6, 302.3, 92.1}, 7.0, 7.4, 34.7, 34.7, 936.2, 1137.7, 403.0, 0.21, 10.57, 3792.2, -758.4},
        {12, {144.6, 177.9, 72.0, 167.2, 965.4, 619.3, 20.0, 98.8}, 4.8, 4.2, 38.1, 38.1, 980.3, 641.8, -677.1, 0.22, 11.29, 2139.2, -427.8},
        {13, {113.3, 277.9, 118.7, 264.2, 987.7, 706.6, 583.2, 58.8}, 4.3, 3.6, 51.9, 51.9, 852.9, 538.2, -629.5, 0.02, 11.81, 1793.9, -358.8},
        {14, {167.1, 251.7, 104.2, 238.1, 978.3, 381.5, 999.8, 67.6}, 5.2, 4.7, 45.4, 45.4, 965.8, 724.8, -482.0, 0.15, 11.73, 2415.9, -483.2},
        {15, {178.4, 352.0, 144.2, 324.9, 953.8, 230.0, 488.4, 47.7}, 5.4, 5.0, 41.4, 41.4, 661.6, 446.5, -430.4, 0.08, 6.46, 1488.2, -297.6},
        {16, {132.9, 272.4, 112.1, 255.5, 970.5, 418.1, 408.4, 61.9}, 4.6, 3.7, 41.5, 41.5, 882.6, 438.3, -888.5, 0.07, 8.73, 1461.1, -292.2},
    };
    return rows;
}

const TableRow& table_row(int index) {
    const auto& t = table_s1();
    if (index < 1 || index > static_cast<int>(t.size()))
        throw std::out_of_range("table row index must be in 1..16, got " + std::to_string(index));
    return t[index - 1];
}

} // namespace cswap
