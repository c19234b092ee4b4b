// CLI front end; subcommands land here as the library modules come online.
#include <cstdio>

int main() {
    std::puts("sketchdepth: subcommands not wired up yet");
    return 3;
}
