// End-to-end checks of the command-line tool: output formats, determinism
// and the documented exit codes.  argv[1] is the path to the binary.

#include "maryland/arithmetics.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

int checks = 0, fails = 0;

void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
        ++fails;
        std::cout << "FAIL  " << what << "\n";
    } else {
        std::cout << "ok    " << what << "\n";
    }
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string l;
    while (std::getline(ss, l)) out.push_back(l);
    return out;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string c;
    while (std::getline(ss, c, ',')) out.push_back(c);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-binary>\n";
        return 2;
    }
    const std::string bin = argv[1];

    { // curves: 7 rows, monotone IDS column
        auto r = run(bin + " curves --lambda 1 --e-min -3 --e-max 3 --steps 7");
        auto ls = lines(r.out);
        expect(r.exit_code == 0 && ls.size() == 8, "curves exits 0 with 7 rows + header");
        expect(ls[0] == "e,gamma,k", "curves CSV header");
        double prev = -1;
        bool inc = true;
        for (std::size_t i = 1; i < ls.size(); ++i) {
            double k = std::stod(split_csv(ls[i])[2]);
            inc = inc && k > prev;
            prev = k;
        }
        expect(inc, "curves k column strictly increasing");
    }

    { // classify: JSON verdict, case 3, schema field
        auto r = run(bin + " classify --lambda 1 --alpha golden --theta 0.25 --depth 20");
        expect(r.exit_code == 0, "classify exits 0");
        expect(r.out.find("\"schema\": \"maryland.verdict/1\"") != std::string::npos,
               "classify carries the schema field");
        expect(r.out.find("\"case\": 3") != std::string::npos, "golden theta=0.25 is case 3");
        expect(r.out.find("\"ac_empty\": true") != std::string::npos, "ac component empty");
    }

    { // eigen records: 5 records, m = 0 at e = 0
        auto r = run(bin + " eigen --lambda 1 --alpha golden --theta 0 --m-range -2:2");
        auto ls = lines(r.out);
        expect(r.exit_code == 0 && ls.size() == 6, "eigen emits 5 records");
        bool found = false;
        for (std::size_t i = 1; i < ls.size(); ++i) {
            auto c = split_csv(ls[i]);
            if (c[0] == "0") found = std::fabs(std::stod(c[1])) <= 1e-9;
        }
        expect(found, "record m=0 has e=0");
    }

    { // eigen --build: eigenfunction CSV columns
        auto r = run(bin +
                     " eigen --lambda 1 --alpha golden --theta 0 --m-range 0:0 --build");
        auto ls = lines(r.out);
        expect(r.exit_code == 0 && ls.size() > 500, "eigen --build emits the lattice CSV");
        expect(ls[0] == "m,n,re_u,im_u,ln_abs_u", "eigenfunction CSV header");
    }

    { // determinism: identical invocation + seed => byte-identical output
        const std::string cmd =
            bin + " cocycle --kind A --lambda 1 --e 0 --alpha golden --n 20000 --phases 4 --seed 9";
        auto a = run(cmd), b = run(cmd);
        expect(a.exit_code == 0 && a.out == b.out, "cocycle output is byte-stable");
    }

    { // ids agreement column
        auto r = run(bin + " ids --lambda 1 --alpha golden --theta 0.13 --size 500 --e 0");
        auto ls = lines(r.out);
        expect(r.exit_code == 0 && ls.size() == 2, "ids emits one row");
        auto c = split_csv(ls[1]);
        expect(std::fabs(std::stod(c[3])) <= 0.05, "finite-volume IDS near the closed form");
    }

    { // exit code 2: usage and validation errors
        expect(run(bin + " curves --no-such-flag 1").exit_code == 2, "unknown flag exits 2");
        expect(run(bin + " classify --alpha 3/7").exit_code == 2, "rational alpha exits 2");
        expect(run(bin + " classify --alpha golden --theta 1/2").exit_code == 2,
               "theta = 1/2 exits 2");
    }

    { // exit code 3: small-divisor breakdown through eigen --build
        auto r = run(bin + " eigen --lambda 1 --alpha cfgen:exp:2:6 --depth 5 "
                           "--theta 0.378094321 --m-range 0:0 --build");
        expect(r.exit_code == 3, "cohomological breakdown exits 3");
    }

    { // exit code 4: forced singularity via a fixed phase on the pole
        expect(run(bin + " checks --only le-closed-form --theta 0.5").exit_code == 4,
               "adversarial fixed phase exits 4");
        expect(run(bin + " checks --only le-closed-form --theta 0.5 --guard 0").exit_code == 4,
               "guard 0 still detects the exact pole");
        // orbit hit: theta = 1/2 - 7 alpha lands on the pole at site 7
        maryland::FrequencyCF g = maryland::cf_expand("golden", 21);
        maryland::Rational th =
            maryland::frac(maryland::Rational(1, 2) - 7 * g.value());
        std::string ths = th.get_num().get_str() + "/" + th.get_den().get_str();
        auto r = run(bin + " ids --lambda 1 --alpha golden --theta " + ths + " --size 200 --e 0");
        expect(r.exit_code == 4, "orbit through the pole exits 4");
    }

    { // checks subcommand: single named check and the default suite
        auto r = run(bin + " checks --only i-epsilon");
        expect(r.exit_code == 0 && r.out.find("PASS") != std::string::npos,
               "checks --only i-epsilon passes");
        expect(run(bin + " checks --only no-such-check").exit_code == 2,
               "unknown check name exits 2");
        auto full = run(bin + " checks");
        expect(full.exit_code == 0 && full.out.find("FAIL") == std::string::npos,
               "default checks run passes everything");
    }

    { // worker count must not change the numbers
        const std::string base =
            bin + " cocycle --kind D --lambda 1 --e 0 --alpha golden --n 20000 --phases 4"
                  " --epsilon-grid 0.2,0.5 --seed 12";
        auto one = run(base + " --threads 1");
        auto two = run(base + " --threads 2");
        expect(one.exit_code == 0 && one.out == two.out,
               "thread count does not alter the output");
    }

    std::cout << (fails ? "CLI TESTS FAILED" : "CLI TESTS PASSED") << " (" << checks - fails
              << "/" << checks << ")\n";
    return fails ? 1 : 0;
}
