#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "bdcover/reports.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    bdcover::ReportDocument doc;
    std::string usage_error;
    int code = bdcover::run_command(args, doc, &usage_error);
    if (code == 2) {
        std::cerr << "usage error: " << usage_error << "\n"
                  << "subcommands: rootdatum qform square symbols orbits lemmas\n";
        return 2;
    }
    bool tsv = std::find(args.begin(), args.end(), "--tsv") != args.end();
    if (tsv)
        std::cout << doc.to_tsv();
    else
        std::cout << doc.to_json().dump(2) << "\n";
    return code;
}
