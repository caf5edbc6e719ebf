package modern;

import java.util.function.Function;

record Point(int x, int y) {
    Point {
        if (x < 0) throw new IllegalArgumentException();
    }

    int sum() {
        Function<Integer, Integer> twice = v -> v * 2;
        Runnable r = () -> {
            System.out.println(x);
            System.out.println(y);
        };
        r.run();
        return twice.apply(x) + y;
    }

    String kind() {
        return switch (x) {
            case 0 -> "origin";
            default -> {
                String s = "other";
                yield s;
            }
        };
    }
}

interface Shape {
    double area();

    default String describe() {
        return "area " + area();
    }
}
