package enums;

enum Op {
    PLUS {
        int apply(int a, int b) { return a + b; }
    },
    MINUS {
        int apply(int a, int b) { return a - b; }
    },
    NOOP;

    private final String symbol = "?";

    int apply(int a, int b) {
        return 0;
    }

    static Op parse(String s) {
        return valueOf(s.trim());
    }
}
