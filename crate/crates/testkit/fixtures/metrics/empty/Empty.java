package empty;

interface Marker {}

class Empty {
}

@interface Tag {
    String value();
    int priority() default 1;
}
